#include "qgol/spectral_stats.hpp"

#include "qgol/error.hpp"

#include <Eigen/Dense>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>

namespace qgol {

double delta_metric(const BinaryState& a, const BinaryState& b)
{
    if (!(a.spec() == b.spec()))
        throw ConfigError("delta_metric: states live on different lattices");
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        diff += a[i] != b[i] ? 1U : 0U;
    return static_cast<double>(diff) / static_cast<double>(a.size());
}

double delta_metric(const GenerationTrace& quantum, const GenerationTrace& classical)
{
    if (quantum.generations() <= kDeltaGeneration || classical.generations() <= kDeltaGeneration)
        throw ConfigError("delta_metric needs at least 3 generations in both traces");
    return delta_metric(quantum.states[kDeltaGeneration], classical.states[kDeltaGeneration]);
}

DeltaSurface delta_surface(const LatticeSpec& spec, std::span<const double> tau_grid,
                           std::span<const double> sigma_grid, std::span<const std::uint64_t> seeds,
                           RuleReading reading, Exec exec)
{
    if (tau_grid.empty() || sigma_grid.empty() || seeds.empty())
        throw ConfigError("delta_surface needs non-empty grids and at least one seed");
    for (double t : tau_grid)
        if (!(t >= 0.0))
            throw ConfigError("tau grid values must be >= 0");
    for (double s : sigma_grid)
        if (!(s >= 0.0))
            throw ConfigError("sigma grid values must be >= 0");

    const NeighborhoodTable table = build_neighborhoods(spec);
    const std::size_t ns = sigma_grid.size();
    const std::size_t ne = seeds.size();

    std::vector<BinaryState> initial;
    std::vector<BinaryState> classical;
    initial.reserve(ne);
    classical.reserve(ne);
    for (auto seed : seeds) {
        initial.push_back(random_state(spec, seed));
        classical.push_back(classical_rule_step(classical_rule_step(initial.back(), table), table));
    }

    DeltaSurface surface;
    surface.tau_grid.assign(tau_grid.begin(), tau_grid.end());
    surface.sigma_grid.assign(sigma_grid.begin(), sigma_grid.end());
    surface.values.assign(tau_grid.size() * ns, 0.0);
    surface.ensemble_size = ne;

    const bool any_positive_tau = std::any_of(tau_grid.begin(), tau_grid.end(), [](double t) { return t > 0.0; });
    std::unique_ptr<HoppingSpectrum> hopping;
    if (any_positive_tau)
        hopping = std::make_unique<HoppingSpectrum>(build_single_particle(table));

    std::vector<double> per_seed(ne * ns);
    for (std::size_t ti = 0; ti < tau_grid.size(); ++ti) {
        const double tau = tau_grid[ti];
        const TransferMatrix m = tau > 0.0 ? hopping->transfer(tau) : TransferMatrix::identity(spec.cell_count());

        auto one_seed = [&](std::size_t e) {
            const DensityField evolved0 = evolve_density(m, initial[e].cells());
            for (std::size_t si = 0; si < ns; ++si) {
                const RuleParams rule{sigma_grid[si]};
                const BinaryState n1 = quantum_rule_step(evolved0, initial[e], rule, table, reading);
                const DensityField evolved1 = evolve_density(m, n1.cells());
                const BinaryState n2 = quantum_rule_step(evolved1, n1, rule, table, reading);
                per_seed[e * ns + si] = delta_metric(n2, classical[e]);
            }
        };
        if (exec == Exec::serial) {
            for (std::size_t e = 0; e < ne; ++e)
                one_seed(e);
        } else {
#pragma omp parallel for schedule(dynamic)
            for (std::size_t e = 0; e < ne; ++e)
                one_seed(e);
        }
        for (std::size_t si = 0; si < ns; ++si) {
            double sum = 0.0;
            for (std::size_t e = 0; e < ne; ++e)
                sum += per_seed[e * ns + si];
            surface.values[ti * ns + si] = sum / static_cast<double>(ne);
        }
    }
    return surface;
}

std::vector<std::pair<double, double>> sigma_min_curve(const DeltaSurface& surface)
{
    const std::size_t ns = surface.sigma_grid.size();
    std::vector<std::pair<double, double>> curve;
    curve.reserve(surface.tau_grid.size());
    for (std::size_t ti = 0; ti < surface.tau_grid.size(); ++ti) {
        std::size_t best = 0;
        for (std::size_t si = 1; si < ns; ++si) {
            const double v = surface.at(ti, si);
            const double b = surface.at(ti, best);
            if (v < b || (v == b && surface.sigma_grid[si] < surface.sigma_grid[best]))
                best = si;
        }
        curve.emplace_back(surface.tau_grid[ti], surface.sigma_grid[best]);
    }
    return curve;
}

std::vector<double> piecewise_linear_slopes(std::span<const std::pair<double, double>> points,
                                            std::span<const double> breakpoints)
{
    const auto nb = static_cast<Eigen::Index>(breakpoints.size());
    const auto np = static_cast<Eigen::Index>(points.size());
    if (np < nb + 2)
        throw FitError("piecewise-linear fit needs at least " + std::to_string(nb + 2) + " points");
    Eigen::MatrixXd a(np, nb + 2);
    Eigen::VectorXd y(np);
    for (Eigen::Index i = 0; i < np; ++i) {
        const double x = points[static_cast<std::size_t>(i)].first;
        a(i, 0) = 1.0;
        a(i, 1) = x;
        for (Eigen::Index k = 0; k < nb; ++k)
            a(i, 2 + k) = std::max(0.0, x - breakpoints[static_cast<std::size_t>(k)]);
        y(i) = points[static_cast<std::size_t>(i)].second;
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
    std::vector<double> slopes;
    double slope = coef(1);
    slopes.push_back(slope);
    for (Eigen::Index k = 0; k < nb; ++k) {
        slope += coef(2 + k);
        slopes.push_back(slope);
    }
    return slopes;
}

std::vector<double> density_series(const GenerationTrace& trace)
{
    std::vector<double> d;
    d.reserve(trace.generations());
    for (const auto& s : trace.states)
        d.push_back(static_cast<double>(s.alive_count()) / static_cast<double>(s.size()));
    return d;
}

namespace {

struct FftwBuffers {
    double* in;
    fftw_complex* out;
    explicit FftwBuffers(std::size_t n)
        : in(fftw_alloc_real(n)), out(fftw_alloc_complex(n / 2 + 1))
    {
    }
    ~FftwBuffers()
    {
        fftw_free(in);
        fftw_free(out);
    }
    FftwBuffers(const FftwBuffers&) = delete;
    FftwBuffers& operator=(const FftwBuffers&) = delete;
};

} // namespace

Spectrum power_spectrum(std::span<const std::uint8_t> histories, std::size_t generations, std::size_t cells,
                        Exec exec)
{
    if (generations < 2)
        throw ConfigError("power spectrum needs at least 2 generations");
    if (histories.size() != generations * cells)
        throw ConfigError("history matrix size mismatch");
    const std::size_t t = generations;
    const std::size_t half = t / 2 + 1;

    // Planning is not thread-safe; execution on fresh arrays with the same
    // alignment is. FFTW_ESTIMATE keeps the chosen algorithm deterministic.
    FftwBuffers plan_buf(t);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(t), plan_buf.in, plan_buf.out, FFTW_ESTIMATE);
    if (!plan)
        throw NumericError("FFTW planning failed", std::nan(""));

    std::vector<double> per_cell(cells * half);
    const double norm = 1.0 / static_cast<double>(t);
    auto one_cell = [&](std::size_t a, FftwBuffers& buf) {
        for (std::size_t k = 0; k < t; ++k)
            buf.in[k] = histories[k * cells + a];
        fftw_execute_dft_r2c(plan, buf.in, buf.out);
        for (std::size_t f = 0; f < half; ++f) {
            const double re = buf.out[f][0] * norm;
            const double im = buf.out[f][1] * norm;
            per_cell[a * half + f] = re * re + im * im;
        }
    };
    if (exec == Exec::serial) {
        FftwBuffers buf(t);
        for (std::size_t a = 0; a < cells; ++a)
            one_cell(a, buf);
    } else {
#pragma omp parallel
        {
            FftwBuffers buf(t);
#pragma omp for schedule(static)
            for (std::size_t a = 0; a < cells; ++a)
                one_cell(a, buf);
        }
    }
    fftw_destroy_plan(plan);

    Spectrum s;
    s.generations = t;
    s.power.assign(t, 0.0);
    for (std::size_t f = 0; f < half; ++f) {
        double sum = 0.0;
        for (std::size_t a = 0; a < cells; ++a)
            sum += per_cell[a * half + f];
        s.power[f] = sum;
    }
    for (std::size_t f = half; f < t; ++f)
        s.power[f] = s.power[t - f];
    return s;
}

Spectrum power_spectrum(const GenerationTrace& trace, Exec exec)
{
    if (trace.states.empty())
        throw ConfigError("power spectrum of an empty trace");
    const std::size_t cells = trace.states.front().size();
    std::vector<std::uint8_t> histories;
    histories.reserve(trace.generations() * cells);
    for (const auto& s : trace.states)
        histories.insert(histories.end(), s.cells().begin(), s.cells().end());
    return power_spectrum(histories, trace.generations(), cells, exec);
}

PowerLawFit fit_power_law(const Spectrum& spectrum, std::size_t f_lo, std::size_t f_hi)
{
    const std::size_t t = spectrum.power.size();
    if (f_lo < 1 || f_lo >= f_hi || f_hi > t / 2)
        throw ConfigError("fit range must satisfy 1 <= f_lo < f_hi <= T/2");
    PowerLawFit fit;
    fit.f_lo = f_lo;
    fit.f_hi = f_hi;
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t f = f_lo; f <= f_hi; ++f) {
        const double p = spectrum.power[f];
        if (!(p > 0.0)) {
            ++fit.skipped_zero_bins;
            continue;
        }
        const double x = std::log(static_cast<double>(f));
        const double y = std::log(p);
        pts.emplace_back(x, y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.points = pts.size();
    if (pts.size() < 2)
        throw FitError("power-law fit impossible: fewer than two nonzero bins in range");
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    fit.alpha = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.alpha * sx) / n;
    fit.c = std::exp(intercept);
    double ss = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y - (intercept + fit.alpha * x);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

std::size_t dominant_frequency(const Spectrum& spectrum)
{
    if (spectrum.power.size() < 2)
        throw ConfigError("spectrum has no nonzero frequencies");
    std::size_t best = 1;
    for (std::size_t f = 2; f < spectrum.power.size(); ++f)
        if (spectrum.power[f] > spectrum.power[best])
            best = f;
    return best;
}

void write_surface_csv(std::ostream& os, const DeltaSurface& surface)
{
    const auto prec = os.precision();
    os << std::setprecision(17);
    os << "tau,sigma,delta\n";
    for (std::size_t ti = 0; ti < surface.tau_grid.size(); ++ti)
        for (std::size_t si = 0; si < surface.sigma_grid.size(); ++si)
            os << surface.tau_grid[ti] << ',' << surface.sigma_grid[si] << ',' << surface.at(ti, si) << '\n';
    os.precision(prec);
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum)
{
    const auto prec = os.precision();
    os << std::setprecision(17);
    os << "f,S\n";
    for (std::size_t f = 0; f < spectrum.power.size(); ++f)
        os << f << ',' << spectrum.power[f] << '\n';
    os.precision(prec);
}

} // namespace qgol

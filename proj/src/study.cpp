#include "qgol/study.hpp"

#include "qgol/error.hpp"
#include "qgol/lattice.hpp"
#include "qgol/propagator.hpp"
#include "qgol/rng.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

namespace qgol {

namespace {

void check_side(int side, Boundary boundary)
{
    if (side < (boundary == Boundary::periodic ? 3 : 2) || side > kMaxEnumerationSide)
        throw UnsupportedWidthError("exhaustive enumeration supports sides up to " +
                                    std::to_string(kMaxEnumerationSide) + " (at least 3 on the torus), got " +
                                    std::to_string(side));
}

std::uint16_t narrow16(std::size_t v)
{
    if (v > std::numeric_limits<std::uint16_t>::max())
        throw NumericError("period or transient exceeds 16 bits", static_cast<double>(v));
    return static_cast<std::uint16_t>(v);
}

std::uint32_t cycle_minimum(const std::vector<std::uint32_t>& succ, std::uint32_t on_cycle)
{
    std::uint32_t best = on_cycle;
    for (std::uint32_t s = succ[on_cycle]; s != on_cycle; s = succ[s])
        best = std::min(best, s);
    return best;
}

void finish_registry(AttractorCatalog& cat, const std::vector<std::uint32_t>& canon_of_ic)
{
    std::vector<std::uint32_t> keys(canon_of_ic);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    cat.registry.assign(keys.size(), Attractor{});
    cat.attractor.resize(cat.size());
    for (std::size_t ic = 0; ic < cat.size(); ++ic) {
        const auto idx = static_cast<std::uint32_t>(
            std::lower_bound(keys.begin(), keys.end(), canon_of_ic[ic]) - keys.begin());
        cat.attractor[ic] = idx;
        auto& a = cat.registry[idx];
        a.canonical = keys[idx];
        a.period = cat.period[ic];
        ++a.basin_size;
    }
}

AttractorCatalog enumerate_serial(int side, Boundary boundary, const std::vector<std::uint32_t>& succ)
{
    const std::size_t n = succ.size();
    AttractorCatalog cat;
    cat.side = side;
    cat.boundary = boundary;
    cat.period.assign(n, 0);
    cat.transient.assign(n, 0);
    std::vector<std::uint32_t> canon(n, 0);
    // 0 = unseen, 1 = on the current walk, 2 = classified
    std::vector<std::uint8_t> mark(n, 0);
    std::vector<std::uint32_t> path;
    for (std::size_t start = 0; start < n; ++start) {
        if (mark[start])
            continue;
        path.clear();
        auto s = static_cast<std::uint32_t>(start);
        while (!mark[s]) {
            mark[s] = 1;
            path.push_back(s);
            s = succ[s];
        }
        std::size_t tail = path.size();
        if (mark[s] == 1) {
            // The walk closed on itself: s starts a new cycle.
            const auto pos = static_cast<std::size_t>(std::find(path.begin(), path.end(), s) - path.begin());
            const std::uint16_t period = narrow16(path.size() - pos);
            const std::uint32_t key = cycle_minimum(succ, s);
            for (std::size_t i = pos; i < path.size(); ++i) {
                cat.period[path[i]] = period;
                cat.transient[path[i]] = 0;
                canon[path[i]] = key;
                mark[path[i]] = 2;
            }
            tail = pos;
        }
        for (std::size_t i = tail; i-- > 0;) {
            const std::uint32_t v = path[i];
            const std::uint32_t next = succ[v];
            cat.period[v] = cat.period[next];
            cat.transient[v] = narrow16(static_cast<std::size_t>(cat.transient[next]) + 1);
            canon[v] = canon[next];
            mark[v] = 2;
        }
    }
    finish_registry(cat, canon);
    return cat;
}

AttractorCatalog enumerate_parallel(int side, Boundary boundary, const std::vector<std::uint32_t>& succ)
{
    const auto n = static_cast<std::ptrdiff_t>(succ.size());
    AttractorCatalog cat;
    cat.side = side;
    cat.boundary = boundary;
    cat.period.assign(succ.size(), 0);
    cat.transient.assign(succ.size(), 0);
    std::vector<std::uint32_t> canon(succ.size(), 0);
    bool overflow = false;
#pragma omp parallel for schedule(static) reduction(|| : overflow)
    for (std::ptrdiff_t ic = 0; ic < n; ++ic) {
        const auto rep = brent_cycle(
            static_cast<std::uint64_t>(ic), [&](std::uint64_t s) { return std::uint64_t{succ[s]}; },
            succ.size() + 1);
        if (rep.period > 0xFFFF || rep.transient > 0xFFFF) {
            overflow = true;
            continue;
        }
        auto on_cycle = static_cast<std::uint32_t>(ic);
        for (std::size_t k = 0; k < rep.transient; ++k)
            on_cycle = succ[on_cycle];
        cat.period[static_cast<std::size_t>(ic)] = static_cast<std::uint16_t>(rep.period);
        cat.transient[static_cast<std::size_t>(ic)] = static_cast<std::uint16_t>(rep.transient);
        canon[static_cast<std::size_t>(ic)] = cycle_minimum(succ, on_cycle);
    }
    if (overflow)
        throw NumericError("period or transient exceeds 16 bits", 0.0);
    finish_registry(cat, canon);
    return cat;
}

struct SymmetryTables {
    int side;
    std::array<std::vector<int>, 8> image;  // image[g][cell] = destination cell
};

SymmetryTables symmetry_tables(int side)
{
    SymmetryTables t{side, {}};
    const int m = side - 1;
    for (int g = 0; g < 8; ++g) {
        t.image[static_cast<std::size_t>(g)].resize(static_cast<std::size_t>(side * side));
        for (int r = 0; r < side; ++r) {
            for (int c = 0; c < side; ++c) {
                int rr = r;
                int cc = c;
                switch (g) {
                case 0: break;
                case 1: rr = c; cc = m - r; break;
                case 2: rr = m - r; cc = m - c; break;
                case 3: rr = m - c; cc = r; break;
                case 4: cc = m - c; break;
                case 5: rr = m - r; break;
                case 6: rr = c; cc = r; break;
                case 7: rr = m - c; cc = m - r; break;
                default: break;
                }
                t.image[static_cast<std::size_t>(g)][static_cast<std::size_t>(r * side + c)] = rr * side + cc;
            }
        }
    }
    return t;
}

std::uint64_t apply_table(std::uint64_t s, const std::vector<int>& image)
{
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < image.size(); ++i)
        if ((s >> i) & 1U)
            out |= std::uint64_t{1} << image[i];
    return out;
}

} // namespace

std::vector<std::uint32_t> successor_table(const SmallBoard& board, Exec exec)
{
    check_side(board.side(), board.boundary());
    const std::size_t n = std::size_t{1} << board.cell_count();
    std::vector<std::uint32_t> succ(n);
    if (exec == Exec::serial) {
        for (std::size_t s = 0; s < n; ++s)
            succ[s] = static_cast<std::uint32_t>(board.step(s));
    } else {
        const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t s = 0; s < count; ++s)
            succ[static_cast<std::size_t>(s)] = static_cast<std::uint32_t>(board.step(static_cast<std::uint64_t>(s)));
    }
    return succ;
}

AttractorCatalog enumerate_classical(int side, Boundary boundary, Exec exec)
{
    check_side(side, boundary);
    const SmallBoard board(side, boundary);
    const auto succ = successor_table(board, exec);
    return exec == Exec::serial ? enumerate_serial(side, boundary, succ) : enumerate_parallel(side, boundary, succ);
}

std::vector<int> observed_periods(const AttractorCatalog& catalog)
{
    std::set<int> ps;
    for (const auto& a : catalog.registry)
        ps.insert(a.period);
    return {ps.begin(), ps.end()};
}

std::vector<TransientSummary> transient_statistics(const AttractorCatalog& catalog, TransientConvention convention)
{
    std::map<int, TransientSummary> by_period;
    std::map<int, double> sums;
    for (std::size_t ic = 0; ic < catalog.size(); ++ic) {
        int t = catalog.transient[ic];
        if (convention == TransientConvention::at_least_one)
            t = std::max(t, 1);
        const int p = catalog.period[ic];
        auto& s = by_period[p];
        if (s.count == 0) {
            s.period = p;
            s.min = t;
            s.max = t;
        }
        ++s.count;
        s.min = std::min(s.min, t);
        s.max = std::max(s.max, t);
        if (s.histogram.size() <= static_cast<std::size_t>(t))
            s.histogram.resize(static_cast<std::size_t>(t) + 1, 0);
        ++s.histogram[static_cast<std::size_t>(t)];
        sums[p] += t;
    }
    std::vector<TransientSummary> out;
    for (auto& [p, s] : by_period) {
        s.mean = sums[p] / static_cast<double>(s.count);
        out.push_back(std::move(s));
    }
    return out;
}

std::uint64_t apply_symmetry(std::uint64_t state, int side, int g)
{
    if (g < 0 || g > 7)
        throw ConfigError("symmetry index must be 0..7");
    const auto t = symmetry_tables(side);
    return apply_table(state, t.image[static_cast<std::size_t>(g)]);
}

std::vector<PeriodCounts> period_counts(const AttractorCatalog& catalog)
{
    const SmallBoard board(catalog.side, catalog.boundary);
    const auto tables = symmetry_tables(catalog.side);
    std::map<int, PeriodCounts> by_period;
    std::map<int, std::set<std::uint64_t>> classes;
    std::vector<std::uint64_t> cycle;
    for (const auto& a : catalog.registry) {
        auto& pc = by_period[a.period];
        pc.period = a.period;
        ++pc.cycles;
        if (a.canonical != 0)
            ++pc.nonempty_cycles;
        pc.cycle_states += a.period;
        pc.basin_states += a.basin_size;
        cycle.clear();
        std::uint64_t s = a.canonical;
        do {
            cycle.push_back(s);
            s = board.step(s);
        } while (s != a.canonical);
        std::uint64_t key = std::numeric_limits<std::uint64_t>::max();
        for (const auto& image : tables.image)
            for (auto c : cycle)
                key = std::min(key, apply_table(c, image));
        classes[a.period].insert(key);
    }
    std::vector<PeriodCounts> out;
    for (auto& [p, pc] : by_period) {
        pc.symmetry_classes = classes[p].size();
        out.push_back(pc);
    }
    return out;
}

std::map<int, std::vector<std::uint32_t>> stratified_sample(const AttractorCatalog& catalog, std::size_t quota,
                                                            std::uint64_t seed)
{
    std::map<int, std::vector<std::uint32_t>> res;
    std::map<int, std::uint64_t> seen;
    auto rng = make_rng(seed);
    for (std::size_t ic = 0; ic < catalog.size(); ++ic) {
        const int p = catalog.period[ic];
        auto& bucket = res[p];
        const std::uint64_t k = seen[p]++;
        if (bucket.size() < quota) {
            bucket.push_back(static_cast<std::uint32_t>(ic));
        } else if (quota > 0) {
            const std::uint64_t j = uniform_below(rng, k + 1);
            if (j < quota)
                bucket[j] = static_cast<std::uint32_t>(ic);
        }
    }
    for (auto& [p, bucket] : res)
        std::sort(bucket.begin(), bucket.end());
    return res;
}

ComparisonSurface comparison_surfaces(const AttractorCatalog& catalog, std::span<const double> tau_grid,
                                      std::span<const double> sigma_grid, const SurfaceOptions& options)
{
    if (catalog.size() == 0)
        throw ConfigError("comparison surfaces need a complete catalog");
    for (double t : tau_grid)
        if (!(t >= 0.0))
            throw ConfigError("tau must be >= 0");
    for (double s : sigma_grid)
        if (!(s >= 0.0))
            throw ConfigError("sigma must be >= 0");

    ComparisonSurface out;
    out.tau_grid.assign(tau_grid.begin(), tau_grid.end());
    out.sigma_grid.assign(sigma_grid.begin(), sigma_grid.end());
    out.periods = observed_periods(catalog);
    out.seed = options.seed;
    out.quota = options.sample_size / std::max<std::size_t>(1, out.periods.size());

    const auto strata = stratified_sample(catalog, out.quota, options.seed);
    std::vector<std::uint32_t> ics;
    std::vector<std::size_t> stratum_of;
    for (std::size_t pi = 0; pi < out.periods.size(); ++pi) {
        const auto it = strata.find(out.periods[pi]);
        if (it == strata.end())
            continue;
        for (auto ic : it->second) {
            ics.push_back(ic);
            stratum_of.push_back(pi);
        }
    }

    const LatticeSpec spec(catalog.side);
    const auto table = build_neighborhoods(spec, catalog.boundary);
    const HoppingSpectrum spectrum(build_single_particle(table));

    struct Outcome {
        long long dt = 0;
        long long dp = 0;
        bool detected = false;
    };
    std::vector<Outcome> outcome(ics.size());
    const auto count = static_cast<std::ptrdiff_t>(ics.size());

    for (double tau : out.tau_grid) {
        const auto m = spectrum.transfer(tau);
        for (double sigma : out.sigma_grid) {
            const SmallQuantumStepper stepper(m, table, RuleParams{sigma}, options.reading);
            auto one = [&](std::ptrdiff_t i) {
                const std::uint32_t ic = ics[static_cast<std::size_t>(i)];
                const auto rep = brent_cycle(
                    ic, [&](std::uint64_t s) { return stepper.step(s); }, options.max_steps);
                Outcome o;
                o.detected = rep.detected;
                if (rep.detected) {
                    o.dt = static_cast<long long>(rep.transient) - catalog.transient[ic];
                    o.dp = static_cast<long long>(rep.period) - catalog.period[ic];
                }
                outcome[static_cast<std::size_t>(i)] = o;
            };
            if (options.exec == Exec::serial) {
                for (std::ptrdiff_t i = 0; i < count; ++i)
                    one(i);
            } else {
#pragma omp parallel for schedule(dynamic, 64)
                for (std::ptrdiff_t i = 0; i < count; ++i)
                    one(i);
            }
            std::vector<SurfaceCell> row(out.periods.size());
            std::vector<long long> sum_t(out.periods.size(), 0);
            std::vector<long long> sum_p(out.periods.size(), 0);
            for (std::size_t i = 0; i < ics.size(); ++i) {
                auto& cell = row[stratum_of[i]];
                if (!outcome[i].detected) {
                    ++cell.undetected;
                    continue;
                }
                ++cell.sampled;
                sum_t[stratum_of[i]] += outcome[i].dt;
                sum_p[stratum_of[i]] += outcome[i].dp;
            }
            for (std::size_t pi = 0; pi < row.size(); ++pi) {
                auto& cell = row[pi];
                cell.tau = tau;
                cell.sigma = sigma;
                cell.period = out.periods[pi];
                cell.absent = cell.sampled == 0;
                if (!cell.absent) {
                    cell.t_p = static_cast<double>(sum_t[pi]) / static_cast<double>(cell.sampled);
                    cell.omega_p = static_cast<double>(sum_p[pi]) / static_cast<double>(cell.sampled);
                }
                out.cells.push_back(cell);
            }
        }
    }
    return out;
}

namespace {

template <class T>
void put_le(std::ostream& os, T v)
{
    char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
        buf[i] = static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFFU);
    os.write(buf, sizeof(T));
}

template <class T>
T get_le(const unsigned char* p)
{
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return static_cast<T>(v);
}

} // namespace

void write_catalog_binary(std::ostream& os, const AttractorCatalog& catalog)
{
    for (std::size_t ic = 0; ic < catalog.size(); ++ic) {
        put_le(os, static_cast<std::uint32_t>(ic));
        put_le(os, catalog.period[ic]);
        put_le(os, catalog.transient[ic]);
    }
    if (!os)
        throw ConfigError("failed to write catalog");
}

std::vector<CatalogRecord> read_catalog_binary(std::istream& is)
{
    std::vector<CatalogRecord> out;
    unsigned char rec[8];
    while (is.read(reinterpret_cast<char*>(rec), sizeof rec))
        out.push_back({get_le<std::uint32_t>(rec), get_le<std::uint16_t>(rec + 4), get_le<std::uint16_t>(rec + 6)});
    if (is.gcount() != 0)
        throw ConfigError("catalog file ends with a partial record");
    return out;
}

void write_period_counts_csv(std::ostream& os, std::span<const PeriodCounts> counts)
{
    os << "period,cycles,nonempty_cycles,cycle_states,symmetry_classes,basin_states\n";
    for (const auto& c : counts)
        os << c.period << ',' << c.cycles << ',' << c.nonempty_cycles << ',' << c.cycle_states << ',' << c.symmetry_classes << ','
           << c.basin_states << '\n';
}

void write_transient_csv(std::ostream& os, std::span<const TransientSummary> stats)
{
    const auto prec = os.precision();
    os << std::setprecision(17) << "period,count,mean,min,max\n";
    for (const auto& s : stats)
        os << s.period << ',' << s.count << ',' << s.mean << ',' << s.min << ',' << s.max << '\n';
    os.precision(prec);
}

void write_comparison_csv(std::ostream& os, const ComparisonSurface& surface)
{
    const auto prec = os.precision();
    os << std::setprecision(17) << "tau,sigma,P,T_P,Omega_P,N_P,undetected\n";
    for (const auto& c : surface.cells) {
        os << c.tau << ',' << c.sigma << ',' << c.period << ',';
        if (c.absent)
            os << "NA,NA,";
        else
            os << c.t_p << ',' << c.omega_p << ',';
        os << c.sampled << ',' << c.undetected << '\n';
    }
    os.precision(prec);
}

} // namespace qgol

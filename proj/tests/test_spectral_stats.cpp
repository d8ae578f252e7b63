#include <doctest.h>

#include "oracles.hpp"

#include "qgol/error.hpp"
#include "qgol/rng.hpp"
#include "qgol/spectral_stats.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

using namespace qgol;

TEST_CASE("delta metric")
{
    const LatticeSpec spec(33);
    const auto a = random_state(spec, 1);
    CHECK(delta_metric(a, a) == 0.0);
    auto b = a;
    b.set(std::size_t{100}, !a[100]);
    CHECK(delta_metric(a, b) == doctest::Approx(1.0 / 1089.0));
    const auto c = random_state(spec, 2);
    CHECK(delta_metric(a, c) == delta_metric(c, a));
}

TEST_CASE("delta surface")
{
    const LatticeSpec spec(9);
    const std::vector<double> taus = {0.0, 0.01, 0.3};
    const std::vector<double> sigmas = {0.0, 0.5, 0.9};
    std::vector<std::uint64_t> seeds(12);
    for (std::size_t i = 0; i < seeds.size(); ++i)
        seeds[i] = stream_seed(4, i);
    const auto par = delta_surface(spec, taus, sigmas, seeds);
    const auto ser = delta_surface(spec, taus, sigmas, seeds, RuleReading::evolved, Exec::serial);
    CHECK(par.values == ser.values);
    CHECK(par.at(0, 0) == 0.0);
    CHECK(par.ensemble_size == 12);
    for (double v : par.values)
        CHECK((v >= 0.0 && v <= 1.0));

    std::ostringstream x, y;
    write_surface_csv(x, par);
    write_surface_csv(y, delta_surface(spec, taus, sigmas, seeds));
    CHECK(x.str() == y.str());
}

TEST_CASE("sigma_min picks the left edge of the minimum")
{
    DeltaSurface s;
    s.tau_grid = {0.0, 0.1, 0.2};
    s.sigma_grid = {0.0, 0.25, 0.5, 0.75};
    s.values = {0.0, 0.1, 0.2, 0.3,
                0.4, 0.3, 0.05, 0.2,
                0.4, 0.0, 0.0, 0.0};
    const auto curve = sigma_min_curve(s);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].second == 0.0);
    CHECK(curve[1].second == 0.5);
    CHECK(curve[2].second == 0.25);
    CHECK(curve[2].first == 0.2);
}

TEST_CASE("piecewise linear slopes")
{
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i <= 50; ++i) {
        const double x = i / 50.0;
        const double y = x < 0.1 ? 2.0 * x : x < 0.4 ? 0.2 + 0.5 * (x - 0.1) : 0.35 - 1.0 * (x - 0.4);
        pts.emplace_back(x, y);
    }
    const std::vector<double> br = {0.1, 0.4};
    const auto slopes = piecewise_linear_slopes(pts, br);
    REQUIRE(slopes.size() == 3);
    CHECK(slopes[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(slopes[1] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(slopes[2] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(contour_curve(0.0) == 0.0);
    CHECK(contour_curve(0.5) == doctest::Approx(-0.337 * 0.25 + 0.192));
}

TEST_CASE("density series")
{
    const LatticeSpec spec(5);
    GenerationTrace t;
    t.states = {BinaryState(spec), BinaryState(spec, std::vector<std::uint8_t>(25, 1))};
    BinaryState blink(spec);
    for (int r = 1; r <= 3; ++r)
        blink.set(r, 2, true);
    t.states.push_back(blink);
    const auto d = density_series(t);
    CHECK(d == std::vector<double>{0.0, 1.0, 3.0 / 25.0});
}

TEST_CASE("power spectrum against a direct DFT")
{
    const std::size_t t_len = 96;
    const std::size_t cells = 7;
    Rng rng = make_rng(3);
    std::vector<std::uint8_t> hist(t_len * cells);
    for (auto& v : hist)
        v = static_cast<std::uint8_t>(rng() & 1U);
    const auto fast = power_spectrum(hist, t_len, cells, Exec::serial);
    const auto ref = oracle::naive_power(hist, t_len, cells);
    for (std::size_t f = 0; f < t_len; ++f)
        CHECK(std::abs(fast.power[f] - ref[f]) < 1e-12);
    CHECK(power_spectrum(hist, t_len, cells, Exec::parallel).power == fast.power);

    double total = std::accumulate(fast.power.begin(), fast.power.end(), 0.0);
    double energy = 0.0;
    for (auto v : hist)
        energy += v;
    CHECK(total == doctest::Approx(energy / t_len).epsilon(1e-12));
    for (std::size_t f = 1; f < t_len; ++f) {
        CHECK(fast.power[f] >= 0.0);
        CHECK(std::abs(fast.power[f] - fast.power[t_len - f]) < 1e-12);
    }
}

TEST_CASE("constant and alternating histories")
{
    const std::size_t t_len = 4096;
    const std::vector<std::uint8_t> constant(t_len * 3, 1);
    const auto c = power_spectrum(constant, t_len, 3);
    CHECK(c.power[0] == doctest::Approx(3.0));
    for (std::size_t f = 1; f < t_len; ++f)
        CHECK(std::abs(c.power[f]) < 1e-20);

    std::vector<std::uint8_t> alt(t_len);
    for (std::size_t t = 0; t < t_len; ++t)
        alt[t] = static_cast<std::uint8_t>(t % 2);
    const auto a = power_spectrum(alt, t_len, 1);
    CHECK(a.power[0] == doctest::Approx(0.25));
    CHECK(a.power[2048] == doctest::Approx(0.25));
    CHECK(dominant_frequency(a) == 2048);
    for (std::size_t f = 1; f < t_len; ++f)
        if (f != 2048)
            CHECK(std::abs(a.power[f]) < 1e-20);
}

TEST_CASE("power-law fit")
{
    Spectrum s;
    s.generations = 4096;
    s.power.resize(4096);
    for (std::size_t f = 1; f < 4096; ++f)
        s.power[f] = 0.4 * std::pow(static_cast<double>(f), -1.033);
    s.power[0] = 99.0;
    s.power[17] = 0.0;
    const auto fit = fit_power_law(s, 1, 2000);
    CHECK(fit.c == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(fit.alpha == doctest::Approx(-1.033).epsilon(1e-6));
    CHECK(fit.skipped_zero_bins == 1);
    CHECK(fit.points == 1999);
    CHECK(fit.residual < 1e-9);

    Spectrum zero;
    zero.generations = 16;
    zero.power.assign(16, 0.0);
    CHECK_THROWS_AS(fit_power_law(zero, 1, 8), FitError);
    CHECK_THROWS_AS(fit_power_law(s, 0, 10), ConfigError);
    CHECK_THROWS_AS(fit_power_law(s, 10, 5000), ConfigError);
}

TEST_CASE("spectrum of a recorded trace")
{
    const LatticeSpec spec(5);
    GenerationTrace t;
    for (int k = 0; k < 32; ++k)
        t.states.push_back(random_state(spec, static_cast<std::uint64_t>(k)));
    std::vector<std::uint8_t> hist;
    for (const auto& s : t.states)
        hist.insert(hist.end(), s.cells().begin(), s.cells().end());
    CHECK(power_spectrum(t).power == power_spectrum(hist, 32, 25).power);

    std::ostringstream os;
    write_spectrum_csv(os, power_spectrum(t));
    CHECK(os.str().rfind("f,S\n", 0) == 0);
}

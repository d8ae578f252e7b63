#include <doctest.h>

#include "qgol/error.hpp"
#include "qgol/study.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

using namespace qgol;

TEST_CASE("4x4 catalogs")
{
    for (Boundary boundary : {Boundary::fixed, Boundary::periodic}) {
        const auto ser = enumerate_classical(4, boundary, Exec::serial);
        const auto par = enumerate_classical(4, boundary, Exec::parallel);
        REQUIRE(ser.size() == 65536);
        CHECK(ser.period == par.period);
        CHECK(ser.transient == par.transient);
        CHECK(ser.attractor == par.attractor);
        REQUIRE(ser.registry.size() == par.registry.size());

        const SmallBoard board(4, boundary);
        const auto step = [&](std::uint64_t s) { return board.step(s); };
        std::vector<std::uint64_t> basin(ser.registry.size(), 0);
        for (std::uint32_t ic = 0; ic < 65536; ++ic) {
            const auto rep = detect_cycle(ic, step);
            REQUIRE(rep.period == ser.period[ic]);
            REQUIRE(rep.transient == ser.transient[ic]);
            const auto b = brent_cycle(ic, step, 1000);
            REQUIRE(b.detected);
            REQUIRE(b.period == rep.period);
            REQUIRE(b.transient == rep.transient);
            REQUIRE(ser.period[board.mirror(ic)] == ser.period[ic]);
            REQUIRE(ser.transient[board.mirror(ic)] == ser.transient[ic]);
            ++basin[ser.attractor[ic]];
        }
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < ser.registry.size(); ++i) {
            CHECK(basin[i] == ser.registry[i].basin_size);
            CHECK(ser.registry[i].basin_size == par.registry[i].basin_size);
            CHECK(ser.registry[i].canonical == par.registry[i].canonical);
            total += ser.registry[i].basin_size;
            if (i > 0)
                CHECK(ser.registry[i - 1].canonical < ser.registry[i].canonical);
        }
        CHECK(total == 65536);
        CHECK(ser.period[0] == 1);
        CHECK(ser.transient[0] == 0);
        CHECK(ser.attractor_of(0).canonical == 0);
    }
}

TEST_CASE("Brent reports an undetected cycle at the step cap")
{
    const auto rep = brent_cycle(0, [](std::uint64_t s) { return s + 1; }, 50);
    CHECK_FALSE(rep.detected);
    const auto rho = brent_cycle(0, [](std::uint64_t s) { return s < 10 ? s + 1 : 4; }, 100);
    CHECK(rho.detected);
    CHECK(rho.transient == 4);
    CHECK(rho.period == 7);
}

TEST_CASE("period counts and transient summaries")
{
    const auto cat = enumerate_classical(4, Boundary::periodic);
    const auto counts = period_counts(cat);
    const auto periods = observed_periods(cat);
    REQUIRE(counts.size() == periods.size());
    std::uint64_t basins = 0;
    for (const auto& c : counts) {
        CHECK(c.cycle_states == c.cycles * static_cast<std::uint64_t>(c.period));
        CHECK(c.symmetry_classes <= c.cycles);
        CHECK(c.symmetry_classes * 8 >= c.cycles);
        CHECK(c.nonempty_cycles == c.cycles - (c.period == 1 ? 1 : 0));
        basins += c.basin_states;
    }
    CHECK(basins == 65536);

    const auto raw = transient_statistics(cat, TransientConvention::raw);
    const auto one = transient_statistics(cat, TransientConvention::at_least_one);
    REQUIRE(raw.size() == one.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        CHECK(one[i].max == std::max(raw[i].max, 1));
        CHECK(one[i].min >= 1);
        CHECK(one[i].mean >= raw[i].mean);
        CHECK(std::accumulate(raw[i].histogram.begin(), raw[i].histogram.end(), std::uint64_t{0}) == raw[i].count);
    }
}

TEST_CASE("symmetries of the square")
{
    const int side = 5;
    const std::uint64_t s = 0b1000110000000000000111011ULL;
    CHECK(apply_symmetry(s, side, 0) == s);
    std::uint64_t r = s;
    for (int i = 0; i < 4; ++i)
        r = apply_symmetry(r, side, 1);
    CHECK(r == s);
    for (int g = 4; g < 8; ++g)
        CHECK(apply_symmetry(apply_symmetry(s, side, g), side, g) == s);
    std::set<std::uint64_t> images;
    for (int g = 0; g < 8; ++g) {
        const auto img = apply_symmetry(s, side, g);
        CHECK(std::popcount(img) == std::popcount(s));
        images.insert(img);
    }
    CHECK(images.size() == 8);
    CHECK(apply_symmetry(1, side, 4) == SmallBoard(side).mirror(1));
    CHECK_THROWS_AS(apply_symmetry(s, side, 8), ConfigError);
}

TEST_CASE("size limits")
{
    CHECK_THROWS_AS(enumerate_classical(6), UnsupportedWidthError);
    CHECK_THROWS(enumerate_classical(2, Boundary::periodic));
    CHECK(enumerate_classical(2, Boundary::fixed).size() == 16);
}

TEST_CASE("binary catalog round trip")
{
    const auto cat = enumerate_classical(3, Boundary::periodic);
    std::stringstream ss;
    write_catalog_binary(ss, cat);
    CHECK(ss.str().size() == 8 * cat.size());
    CHECK(static_cast<unsigned char>(ss.str()[0]) == 0);
    const auto back = read_catalog_binary(ss);
    REQUIRE(back.size() == cat.size());
    for (std::uint32_t ic = 0; ic < cat.size(); ++ic) {
        CHECK(back[ic].ic == ic);
        CHECK(back[ic].period == cat.period[ic]);
        CHECK(back[ic].transient == cat.transient[ic]);
    }
    std::stringstream partial(std::string(12, '\0'));
    CHECK_THROWS_AS(read_catalog_binary(partial), ConfigError);
}

TEST_CASE("stratified sample")
{
    const auto cat = enumerate_classical(4, Boundary::periodic);
    const auto a = stratified_sample(cat, 50, 9);
    CHECK(a == stratified_sample(cat, 50, 9));
    CHECK_FALSE(a == stratified_sample(cat, 50, 10));
    for (const auto& [p, ics] : a) {
        std::size_t available = 0;
        for (std::uint16_t q : cat.period)
            available += q == p;
        CHECK(ics.size() == std::min<std::size_t>(50, available));
        CHECK(std::is_sorted(ics.begin(), ics.end()));
        CHECK(std::adjacent_find(ics.begin(), ics.end()) == ics.end());
        for (auto ic : ics)
            CHECK(cat.period[ic] == p);
    }
}

TEST_CASE("comparison surfaces")
{
    const auto cat = enumerate_classical(4, Boundary::periodic);
    const std::vector<double> taus = {0.0, 0.5};
    const std::vector<double> sigmas = {0.0, 0.5};
    SurfaceOptions opt;
    opt.sample_size = 400;
    opt.seed = 2;
    const auto par = comparison_surfaces(cat, taus, sigmas, opt);
    opt.exec = Exec::serial;
    const auto ser = comparison_surfaces(cat, taus, sigmas, opt);
    REQUIRE(par.cells.size() == taus.size() * sigmas.size() * par.periods.size());
    for (std::size_t i = 0; i < par.cells.size(); ++i) {
        CHECK(par.cells[i].t_p == ser.cells[i].t_p);
        CHECK(par.cells[i].omega_p == ser.cells[i].omega_p);
    }
    for (std::size_t p = 0; p < par.periods.size(); ++p) {
        const auto& c = par.at(0, 0, p);
        CHECK_FALSE(c.absent);
        CHECK(c.t_p == 0.0);
        CHECK(c.omega_p == 0.0);
        CHECK(c.undetected == 0);
    }
    std::ostringstream os;
    write_comparison_csv(os, par);
    CHECK(os.str().rfind("tau,sigma,P,T_P,Omega_P,N_P,undetected\n", 0) == 0);
}

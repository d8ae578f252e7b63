#include <doctest.h>

#include "oracles.hpp"

#include "qgol/error.hpp"
#include "qgol/fock_oracle.hpp"
#include "qgol/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace qgol;

namespace {

HoppingSpectrum spectrum_for(const NeighborhoodTable& table)
{
    return HoppingSpectrum(build_single_particle(table));
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("single-particle Hamiltonian of the 2x2 lattice")
{
    const auto h = build_single_particle(build_neighborhoods(LatticeSpec(2))).h;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            CHECK(h(a, b) == (a == b ? 1.0 : -2.0));
}

TEST_CASE("tau = 0 gives the identity")
{
    const auto sp = spectrum_for(build_neighborhoods(LatticeSpec(5)));
    const auto m = sp.transfer(0.0);
    CHECK(m.is_identity());
    CHECK(max_abs(m.matrix() - Eigen::MatrixXd::Identity(25, 25)) == 0.0);
    CHECK(TransferMatrix::identity(4).is_identity());
}

TEST_CASE("two coupled modes")
{
    const NeighborhoodTable chain(1, 2);
    const auto sp = spectrum_for(chain);
    for (double tau : {0.1, 0.3, 0.7, 1.9}) {
        const auto m = sp.transfer(tau).matrix();
        const double s = std::sin(2.0 * tau);
        CHECK(m(0, 1) == doctest::Approx(s * s).epsilon(1e-13));
        CHECK(m(0, 0) == doctest::Approx(1.0 - s * s).epsilon(1e-13));
    }
}

TEST_CASE("unitarity and double stochasticity")
{
    for (int side : {3, 5, 8}) {
        const auto sp = spectrum_for(build_neighborhoods(LatticeSpec(side)));
        CHECK(sp.residual() < 1e-10);
        const int n = side * side;
        for (double tau : {0.0, 0.01, 0.1, 0.25, 0.5, 1.0}) {
            const auto u = sp.propagator(tau).u;
            CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
            const auto m = sp.transfer(tau).matrix();
            CHECK((m.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
            CHECK((m.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
            CHECK(m.minCoeff() >= 0.0);
            CHECK(max_abs(m - m.transpose()) < 1e-14);
        }
    }
}

TEST_CASE("transfer matrix matches a Taylor-series exponential")
{
    for (auto [rows, cols] : {std::pair{1, 2}, {3, 3}, {5, 5}, {4, 6}}) {
        const NeighborhoodTable t(rows, cols);
        const auto sp = spectrum_for(t);
        const auto h = build_single_particle(t).h;
        for (double tau : {0.01, 0.25, 1.0, 3.0}) {
            CHECK(max_abs(sp.transfer(tau).matrix() - oracle::transfer_taylor(h, tau)) < 1e-11);
            CHECK(max_abs(transfer_matrix(exponentiate(build_single_particle(t), tau)).matrix() -
                          sp.transfer(tau).matrix()) < 1e-13);
        }
    }
}

TEST_CASE("a constant diagonal shift leaves M unchanged")
{
    const auto base = build_single_particle(build_neighborhoods(LatticeSpec(4)));
    const auto ref = HoppingSpectrum(base).transfer(0.37).matrix();
    for (double c : {-3.0, 1.0, 10.0}) {
        SingleParticleHamiltonian shifted = base;
        shifted.h += c * Eigen::MatrixXd::Identity(16, 16);
        CHECK(max_abs(HoppingSpectrum(shifted).transfer(0.37).matrix() - ref) < 1e-12);
    }
}

TEST_CASE("an isolated cell does not move")
{
    const auto sp = spectrum_for(NeighborhoodTable(1, 1));
    CHECK(sp.transfer(0.8).matrix()(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("evolve_density")
{
    const LatticeSpec spec(7);
    const auto sp = spectrum_for(build_neighborhoods(spec));
    const auto m = sp.transfer(0.4);

    const BinaryState all(spec, std::vector<std::uint8_t>(49, 1));
    for (double x : evolve_density(m, all))
        CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : evolve_density(m, BinaryState(spec)))
        CHECK(x == 0.0);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = random_state(spec, seed);
        const auto serial = evolve_density(m, s, Exec::serial);
        CHECK(serial == evolve_density(m, s, Exec::parallel));
        const auto dense = evolve_density(m, s.as_density());
        double sum = 0.0;
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(std::abs(serial[i] - dense[i]) < 1e-14);
            sum += serial[i];
        }
        CHECK(std::abs(sum - static_cast<double>(s.alive_count())) < 1e-9);
    }

    const auto id = TransferMatrix::identity(49);
    const auto s = random_state(spec, 3);
    const auto out = evolve_density(id, s);
    for (std::size_t i = 0; i < out.size(); ++i)
        CHECK(out[i] == s[i]);
}

TEST_CASE("2x2 lattice against the Fock space")
{
    const auto table = build_neighborhoods(LatticeSpec(2));
    const auto m = spectrum_for(table).transfer(0.3);
    const std::vector<std::uint8_t> n0 = {1, 0, 0, 0};
    const auto single = evolve_density(m, std::span<const std::uint8_t>(n0));

    const FockSpace space(4);
    const FockEvolver ev(full_hamiltonian(space, table));
    const auto many = number_expectations(space, ev.evolve(space.basis_state(n0), 0.3));
    for (int a = 0; a < 4; ++a)
        CHECK(std::abs(single[a] - many[a]) < 1e-10);
}

TEST_CASE("errors and CSV output")
{
    const auto h = build_single_particle(build_neighborhoods(LatticeSpec(3)));
    CHECK_THROWS_AS(exponentiate(h, -0.1), ConfigError);
    CHECK_THROWS_AS(HoppingSpectrum(h).transfer(-1.0), ConfigError);

    std::ostringstream os;
    write_transfer_csv(os, HoppingSpectrum(h).transfer(0.2));
    std::istringstream is(os.str());
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) {
        ++lines;
        CHECK(std::count(line.begin(), line.end(), ',') == 8);
    }
    CHECK(lines == 9);
}

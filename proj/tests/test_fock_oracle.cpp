#include <doctest.h>

#include "propositions.hpp"

#include "qgol/error.hpp"
#include "qgol/fock_oracle.hpp"
#include "qgol/propagator.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace qgol;

namespace {

Eigen::MatrixXd dense(const SparseOperator& op) { return Eigen::MatrixXd(op); }

} // namespace

TEST_CASE("canonical anticommutation relations hold exactly")
{
    for (int m : {1, 3, 5}) {
        const FockSpace space(m);
        const auto dim = static_cast<Eigen::Index>(space.dimension());
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const auto ai = dense(space.annihilator(i));
                const auto aj = dense(space.annihilator(j));
                const auto cj = dense(space.creator(j));
                const Eigen::MatrixXd mixed = ai * cj + cj * ai;
                CHECK((mixed - (i == j ? id : Eigen::MatrixXd::Zero(dim, dim))).cwiseAbs().maxCoeff() == 0.0);
                CHECK((ai * aj + aj * ai).cwiseAbs().maxCoeff() == 0.0);
            }
        }
    }
}

TEST_CASE("single mode lowering matrix")
{
    const FockSpace space(1);
    const auto a = dense(space.annihilator(0));
    CHECK(a(0, 0) == 0.0);
    CHECK(a(0, 1) == 1.0);
    CHECK(a(1, 0) == 0.0);
    CHECK(a(1, 1) == 0.0);
}

TEST_CASE("basis states are number eigenstates")
{
    const FockSpace space(4);
    for (std::uint64_t k = 0; k < 16; ++k) {
        const FockState phi = space.basis_state(k);
        for (int a = 0; a < 4; ++a) {
            const FockState n_phi = space.number(a) * phi;
            const double expected = static_cast<double>((k >> a) & 1U);
            CHECK((n_phi - expected * phi).norm() == 0.0);
        }
    }
    CHECK_THROWS_AS(FockSpace(13), CapacityError);
}

TEST_CASE("many-body Hamiltonian")
{
    for (auto [rows, cols] : {std::pair{1, 2}, {2, 2}, {2, 3}, {3, 3}}) {
        const NeighborhoodTable table(rows, cols);
        const int m = rows * cols;
        const FockSpace space(m);
        const Eigen::MatrixXd h = full_hamiltonian(space, table);
        CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);

        Eigen::MatrixXd total = Eigen::MatrixXd::Zero(h.rows(), h.cols());
        for (int a = 0; a < m; ++a)
            total += dense(space.number(a));
        CHECK((h * total - total * h).cwiseAbs().maxCoeff() < 1e-12);

        // Free fermions: many-body energies are the subset sums of the
        // single-particle energies.
        const Eigen::MatrixXd h1 = build_single_particle(table).h;
        const Eigen::VectorXd eps = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h1).eigenvalues();
        std::vector<double> sums;
        for (std::uint64_t s = 0; s < space.dimension(); ++s) {
            double e = 0.0;
            for (int a = 0; a < m; ++a)
                if ((s >> a) & 1U)
                    e += eps(a);
            sums.push_back(e);
        }
        std::sort(sums.begin(), sums.end());
        const FockEvolver ev(h);
        for (std::size_t i = 0; i < sums.size(); ++i)
            CHECK(std::abs(ev.energies()(static_cast<Eigen::Index>(i)) - sums[i]) < 1e-10);
    }
}

TEST_CASE("Schroedinger evolution")
{
    const auto table = build_neighborhoods(LatticeSpec(2));
    const FockSpace space(4);
    const Eigen::MatrixXd h = full_hamiltonian(space, table);
    const FockEvolver ev(h);
    const FockState phi = space.basis_state(std::uint64_t{0b0101});

    CHECK((ev.evolve(phi, 0.0) - phi).norm() < 1e-14);
    for (double t : {0.1, 1.0, 7.5})
        CHECK(std::abs(ev.evolve(phi, t).norm() - 1.0) < 1e-12);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const FockState v = es.eigenvectors().col(5).cast<std::complex<double>>();
    const double e = es.eigenvalues()(5);
    const FockState expected = std::exp(std::complex<double>(0.0, -e * 0.7)) * v;
    CHECK((ev.evolve(v, 0.7) - expected).norm() < 1e-12);
    CHECK((schrodinger_evolve(h, phi, 0.4) - ev.evolve(phi, 0.4)).norm() < 1e-12);
    CHECK((ev.propagator(0.4) * phi - ev.evolve(phi, 0.4)).norm() < 1e-12);
}

TEST_CASE("number expectations")
{
    const FockSpace space(3);
    const std::vector<std::uint8_t> occ = {1, 0, 1};
    const auto n = number_expectations(space, space.basis_state(occ));
    CHECK(n == std::vector<double>{1.0, 0.0, 1.0});

    const FockSpace two(2);
    const FockState mix = (two.basis_state(std::uint64_t{1}) + two.basis_state(std::uint64_t{2})) / std::sqrt(2.0);
    const auto half = number_expectations(two, mix);
    CHECK(half[0] == doctest::Approx(0.5));
    CHECK(half[1] == doctest::Approx(0.5));
}

TEST_CASE("rule operator")
{
    const auto table = build_neighborhoods(LatticeSpec(2));
    const FockSpace space(4);
    const FockEvolver ev(full_hamiltonian(space, table));
    const double tau = 0.3;

    SUBCASE("reconstruction along a trajectory")
    {
        const std::vector<std::vector<std::uint8_t>> traj = {{1, 0, 0, 1}, {0, 1, 1, 0}, {1, 1, 0, 0}};
        const auto r = build_rule_operator(space, traj, ev, tau);
        CHECK(r.addenda() == 2);
        CHECK_FALSE(r.degenerate());
        for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
            const FockState in = ev.evolve(space.basis_state(traj[k]), tau);
            CHECK((r.apply(in) - space.basis_state(traj[k + 1])).norm() < 1e-8);
        }
        CHECK((r.dense() * ev.evolve(space.basis_state(traj[0]), tau) - space.basis_state(traj[1])).norm() < 1e-8);
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r.dense());
        CHECK(svd.singularValues()(0) <= static_cast<double>(r.addenda()) + 1e-12);
        CHECK_FALSE(r.rank_one_form().has_value());
    }

    SUBCASE("a fixed point collapses to rank one")
    {
        const std::vector<std::vector<std::uint8_t>> traj(4, std::vector<std::uint8_t>{1, 1, 0, 0});
        const auto r = build_rule_operator(space, traj, ev, tau);
        CHECK(r.addenda() == 3);
        CHECK(r.degenerate());
        CHECK(r.duplicates() == 2);
        CHECK(r.terms().size() == 1);
        CHECK(r.terms().front().multiplicity == 3);
        const auto one = r.rank_one_form();
        REQUIRE(one.has_value());
        CHECK(one->output == 0b0011);
        const FockState in = ev.evolve(space.basis_state(traj[0]), tau);
        CHECK((r.apply(in) - space.basis_state(traj[0])).norm() < 1e-8);
    }
}

TEST_CASE("sequence classification")
{
    const std::vector<double> flat(8, 5.0);
    auto c = classify_sequence(flat, 0.0);
    CHECK(c.kind == SequenceKind::equilibrium);
    CHECK(c.transient == 0);
    CHECK(c.limit == 5.0);

    const std::vector<double> two = {9, 1, 2, 1, 2, 1, 2, 1, 2};
    c = classify_sequence(two, 0.0);
    CHECK(c.kind == SequenceKind::cycle);
    CHECK(c.period == 2);
    CHECK(c.transient == 1);

    const double eps = 0.1;
    std::vector<double> band = {1.0};
    for (int i = 0; i < 9; ++i)
        band.push_back(i % 2 ? 1.0 - eps / 2 : 1.0 + eps / 2);
    c = classify_sequence(band, eps);
    CHECK(c.kind == SequenceKind::epsilon_equilibrium);
    CHECK(c.limit == doctest::Approx(1.0));
    CHECK(classify_sequence(band, eps / 4).kind == SequenceKind::cycle);

    const std::vector<double> wander = {1, 4, 2, 8, 5, 7, 3, 9};
    CHECK(classify_sequence(wander, 0.0).kind == SequenceKind::none);
    CHECK_THROWS_AS(classify_sequence(std::vector<double>{1, 2, 3}, 0.1), ConfigError);
}

TEST_CASE("periodicity propositions on engineered 2x2 rules")
{
    SUBCASE("input-independent rule")
    {
        const auto run = props::run_successor_map(props::constant_rule(0b0110), 0b0001, 12);
        CHECK(run.fock_residual < 1e-10);
        const auto c = classify_sequence(run.xs, 0.0);
        CHECK(c.kind == SequenceKind::equilibrium);
        CHECK(c.transient == 1);
        for (std::size_t k = 2; k < run.xs.size(); ++k)
            CHECK(run.xs[k] == run.xs[1]);
    }
    SUBCASE("fixed point reached after K steps")
    {
        for (std::size_t k = 1; k <= 5; ++k) {
            std::vector<std::uint64_t> path(props::kPath.begin(), props::kPath.begin() + static_cast<long>(k) + 1);
            const auto run = props::run_successor_map(props::path_rule(path, k), path[0], 16);
            const auto c = classify_sequence(run.xs, 0.0);
            CHECK(c.kind == SequenceKind::equilibrium);
            CHECK(c.transient == k);
        }
    }
    SUBCASE("return to n^N after N + K steps")
    {
        for (std::size_t n = 0; n <= 2; ++n) {
            for (std::size_t k = 1; k <= 4; ++k) {
                std::vector<std::uint64_t> path(props::kPath.begin(),
                                                props::kPath.begin() + static_cast<long>(n + k) + 1);
                const auto run = props::run_successor_map(props::path_rule(path, n), path[0], 24);
                CHECK(run.fock_residual < 1e-10);
                const auto c = classify_sequence(run.xs, 0.0);
                CHECK(c.kind == SequenceKind::cycle);
                CHECK(c.period == k + 1);
                CHECK(c.transient == n);
            }
        }
    }
    SUBCASE("epsilon-equilibrium of a forced cycle")
    {
        for (std::size_t k = 2; k <= 5; ++k) {
            std::vector<std::uint64_t> cycle(props::kPath.begin() + 1, props::kPath.begin() + 1 + static_cast<long>(k));
            const auto run = props::run_successor_map(props::path_rule(cycle, 0), cycle[0], 24);
            double mean = 0.0;
            for (std::size_t j = 0; j < k; ++j)
                mean += run.xs[j];
            mean /= static_cast<double>(k);
            double bound = 0.0;
            for (std::size_t j = 0; j < k; ++j)
                bound = std::max(bound, std::abs(mean - run.xs[j]));
            for (double x : run.xs)
                CHECK(std::abs(x - mean) <= bound);
            const auto c = classify_sequence(run.xs, bound, mean);
            CHECK(c.kind == SequenceKind::epsilon_equilibrium);
            CHECK(c.limit == mean);
            CHECK(classify_sequence(run.xs, bound * (1 - 1e-6), mean).kind == SequenceKind::cycle);
        }
    }
}

#pragma once

// Exact many-body reference for small mode counts. Everything here works on
// the full 2^m dimensional Fock space and is deliberately independent of the
// single-particle reduction in propagator.hpp, which it exists to check.

#include "qgol/lattice.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qgol {

inline constexpr int kMaxFockModes = 12;

using FockState = Eigen::VectorXcd;
using SparseOperator = Eigen::SparseMatrix<double>;

/// Jordan-Wigner fermions on m modes. Basis vector k has occupation
/// n_alpha = bit alpha of k, with the sign string running over lower modes.
class FockSpace {
public:
    explicit FockSpace(int modes);

    int modes() const noexcept { return modes_; }
    std::size_t dimension() const noexcept { return std::size_t{1} << modes_; }

    const SparseOperator& annihilator(int alpha) const { return annihilators_.at(static_cast<std::size_t>(alpha)); }
    const SparseOperator& creator(int alpha) const { return creators_.at(static_cast<std::size_t>(alpha)); }
    SparseOperator number(int alpha) const;

    FockState basis_state(std::span<const std::uint8_t> occupations) const;
    FockState basis_state(std::uint64_t index) const;

private:
    int modes_;
    std::vector<SparseOperator> annihilators_;
    std::vector<SparseOperator> creators_;
};

/// H = sum_a a_a^+ a_a + sum_{a,b} p_ab (a_a a_b^+ + a_b a_a^+), ordered double
/// sum, assembled from the Jordan-Wigner matrices. Real symmetric in this basis.
Eigen::MatrixXd full_hamiltonian(const FockSpace& space, const NeighborhoodTable& table);

/// exp(-i H t) via one Hermitian eigendecomposition.
class FockEvolver {
public:
    explicit FockEvolver(const Eigen::MatrixXd& hamiltonian);

    FockState evolve(const FockState& state, double t) const;

    /// Dense exp(-i H t); only sensible for small dimensions.
    Eigen::MatrixXcd propagator(double t) const;

    const Eigen::VectorXd& energies() const noexcept { return values_; }

private:
    Eigen::VectorXd values_;
    Eigen::MatrixXd vectors_;
};

FockState schrodinger_evolve(const Eigen::MatrixXd& hamiltonian, const FockState& state, double t);

/// n_alpha = <psi, N_alpha psi> = |a_alpha psi|^2.
std::vector<double> number_expectations(const FockSpace& space, const FockState& state);

/// Effective rule operator R = sum_k phi_{n^{k+1}} (x) conj(exp(-iH tau) phi_{n^k}).
///
/// Repeated input states would make the rank-one terms non-orthogonal; only
/// the first occurrence of each input is kept and the duplicates are counted.
class RuleOperator {
public:
    struct Term {
        std::uint64_t output;  // basis index of phi_{n^{k+1}}
        std::uint64_t input;   // basis index of phi_{n^k}
        FockState evolved_input;
        int multiplicity = 1;  // addenda of the raw sum sharing this input
    };

    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::size_t addenda() const noexcept { return addenda_; }
    bool degenerate() const noexcept { return duplicates_ > 0; }
    std::size_t duplicates() const noexcept { return duplicates_; }
    std::size_t dimension() const noexcept { return dimension_; }

    FockState apply(const FockState& v) const;
    Eigen::MatrixXcd dense() const;

    /// When every kept term shares one output, R = phi_out (x) conj(Phi) with
    /// Phi the sum of the distinct evolved inputs.
    struct RankOne {
        std::uint64_t output;
        FockState phi;
    };
    std::optional<RankOne> rank_one_form() const;

private:
    friend RuleOperator build_rule_operator(const FockSpace&, std::span<const std::vector<std::uint8_t>>,
                                            const FockEvolver&, double);
    std::vector<Term> terms_;
    std::size_t addenda_ = 0;
    std::size_t duplicates_ = 0;
    std::size_t dimension_ = 0;
};

RuleOperator build_rule_operator(const FockSpace& space, std::span<const std::vector<std::uint8_t>> trajectory,
                                 const FockEvolver& evolver, double tau);

/// Asymptotic shape of an observable sequence x_1, x_2, ...
enum class SequenceKind { equilibrium, epsilon_equilibrium, cycle, none };

std::string to_string(SequenceKind kind);

struct SequenceClass {
    SequenceKind kind = SequenceKind::none;
    std::size_t transient = 0;  // 0-based index where the settled tail begins
    std::size_t period = 0;     // 1 for (epsilon-)equilibria, L for cycles
    double limit = 0.0;         // x_infinity for (epsilon-)equilibria
};

/// Classifies a finite sequence (length >= 4). A behaviour counts as
/// eventual when it holds on a suffix covering at least half the sequence;
/// the reported transient is the earliest such onset. Checks run in the
/// order equality (tolerance 1e-9), epsilon band |x - x_inf| <= epsilon,
/// exact periodicity (tolerance 1e-9, at least two full periods in the tail).
/// With `center` the band is taken around that value instead of the tail
/// midrange.
SequenceClass classify_sequence(std::span<const double> xs, double epsilon,
                                std::optional<double> center = std::nullopt);

} // namespace qgol

#pragma once

#include "qgol/lattice.hpp"
#include "qgol/parallel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>

namespace qgol {

/// Single-particle reduction of the quadratic hopping Hamiltonian
///
///   H = sum_a N_a + sum_{a,b} p_ab (a_a a_b^+ + a_b a_a^+)
///
/// with the double sum over ordered pairs. The anticommutation relations
/// turn the hopping term into -2 sum_{a,b} p_ab a_a^+ a_b, so H = sum h_ab a_a^+ a_b
/// with h = I - 2 A (A the 0/1 Moore adjacency matrix).
struct SingleParticleHamiltonian {
    Eigen::MatrixXd h;
};

SingleParticleHamiltonian build_single_particle(const NeighborhoodTable& table);

/// U = exp(-i h tau) on mode space.
struct Propagator {
    Eigen::MatrixXcd u;
    double tau = 0.0;
};

/// M_ab = |U_ab|^2. Doubly stochastic; identity at tau = 0.
class TransferMatrix {
public:
    TransferMatrix() = default;
    TransferMatrix(Eigen::MatrixXd m, double tau);

    static TransferMatrix identity(int cells);

    const Eigen::MatrixXd& matrix() const noexcept { return m_; }
    int size() const noexcept { return static_cast<int>(m_.rows()); }
    double tau() const noexcept { return tau_; }
    bool is_identity() const noexcept { return identity_; }

private:
    Eigen::MatrixXd m_;
    double tau_ = 0.0;
    bool identity_ = false;
};

/// Eigendecomposition h = V diag(lambda) V^T, shared by every tau of a sweep.
class HoppingSpectrum {
public:
    explicit HoppingSpectrum(const SingleParticleHamiltonian& h);

    const Eigen::VectorXd& eigenvalues() const noexcept { return values_; }
    const Eigen::MatrixXd& eigenvectors() const noexcept { return vectors_; }
    int size() const noexcept { return static_cast<int>(values_.size()); }

    /// max |h V - V diag(lambda)|
    double residual() const noexcept { return residual_; }

    Propagator propagator(double tau) const;

    /// |U(tau)|^2 without materialising the complex propagator.
    TransferMatrix transfer(double tau) const;

private:
    // C = V cos(lambda t) V^T, S = V sin(lambda t) V^T, so U = C - i S.
    void cos_sin(double tau, Eigen::MatrixXd& c, Eigen::MatrixXd& s) const;

    Eigen::VectorXd values_;
    Eigen::MatrixXd vectors_;
    double residual_ = 0.0;
};

/// Throws ConfigError for tau < 0 and NumericError if the eigensolver fails.
Propagator exponentiate(const SingleParticleHamiltonian& h, double tau);

TransferMatrix transfer_matrix(const Propagator& prop);

/// n(tau) = M n(0). The binary overload sums the rows of M selected by the
/// alive cells, which is what the generation loop uses.
DensityField evolve_density(const TransferMatrix& m, std::span<const double> n0, Exec exec = Exec::serial);
DensityField evolve_density(const TransferMatrix& m, std::span<const std::uint8_t> n0, Exec exec = Exec::serial);
inline DensityField evolve_density(const TransferMatrix& m, const BinaryState& n0, Exec exec = Exec::serial)
{
    return evolve_density(m, n0.cells(), exec);
}

/// Row-major CSV, one matrix row per line, 17 significant digits.
void write_transfer_csv(std::ostream& os, const TransferMatrix& m);

} // namespace qgol

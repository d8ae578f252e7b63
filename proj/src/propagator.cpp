#include "qgol/propagator.hpp"

#include "qgol/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace qgol {

SingleParticleHamiltonian build_single_particle(const NeighborhoodTable& table)
{
    const int n = table.cell_count();
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
    for (int a = 0; a < n; ++a)
        for (int b : table.neighbors(a))
            h(a, b) = -2.0;
    return {std::move(h)};
}

TransferMatrix::TransferMatrix(Eigen::MatrixXd m, double tau) : m_(std::move(m)), tau_(tau)
{
    if (m_.rows() != m_.cols())
        throw ConfigError("transfer matrix must be square");
}

TransferMatrix TransferMatrix::identity(int cells)
{
    TransferMatrix t(Eigen::MatrixXd::Identity(cells, cells), 0.0);
    t.identity_ = true;
    return t;
}

HoppingSpectrum::HoppingSpectrum(const SingleParticleHamiltonian& h)
{
    const Eigen::MatrixXd& m = h.h;
    if (m.rows() != m.cols())
        throw ConfigError("single-particle Hamiltonian must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    const double scale = std::max(1.0, m.norm()) * std::max(1.0, std::sqrt(static_cast<double>(m.rows())));
    if (solver.info() != Eigen::Success)
        throw NumericError("symmetric eigensolver did not converge", std::nan(""));
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
    residual_ = (m * vectors_ - vectors_ * values_.asDiagonal()).cwiseAbs().maxCoeff();
    if (!(residual_ <= 1e-12 * scale))
        throw NumericError("symmetric eigendecomposition residual above tolerance", residual_);
}

void HoppingSpectrum::cos_sin(double tau, Eigen::MatrixXd& c, Eigen::MatrixXd& s) const
{
    const Eigen::ArrayXd phase = values_.array() * tau;
    const Eigen::MatrixXd vc = vectors_ * phase.cos().matrix().asDiagonal();
    const Eigen::MatrixXd vs = vectors_ * phase.sin().matrix().asDiagonal();
    c.noalias() = vc * vectors_.transpose();
    s.noalias() = vs * vectors_.transpose();
}

Propagator HoppingSpectrum::propagator(double tau) const
{
    if (!(tau >= 0.0))
        throw ConfigError("transient duration tau must be >= 0");
    const int n = size();
    if (tau == 0.0)
        return {Eigen::MatrixXcd::Identity(n, n), 0.0};
    Eigen::MatrixXd c;
    Eigen::MatrixXd s;
    cos_sin(tau, c, s);
    Eigen::MatrixXcd u(n, n);
    u.real() = c;
    u.imag() = -s;
    return {std::move(u), tau};
}

TransferMatrix HoppingSpectrum::transfer(double tau) const
{
    if (!(tau >= 0.0))
        throw ConfigError("transient duration tau must be >= 0");
    if (tau == 0.0)
        return TransferMatrix::identity(size());
    Eigen::MatrixXd c;
    Eigen::MatrixXd s;
    cos_sin(tau, c, s);
    return TransferMatrix(c.array().square() + s.array().square(), tau);
}

Propagator exponentiate(const SingleParticleHamiltonian& h, double tau)
{
    if (!(tau >= 0.0))
        throw ConfigError("transient duration tau must be >= 0");
    if (tau == 0.0)
        return {Eigen::MatrixXcd::Identity(h.h.rows(), h.h.cols()), 0.0};
    return HoppingSpectrum(h).propagator(tau);
}

TransferMatrix transfer_matrix(const Propagator& prop)
{
    if (prop.tau == 0.0 && prop.u.isIdentity(0.0))
        return TransferMatrix::identity(static_cast<int>(prop.u.rows()));
    return TransferMatrix(prop.u.cwiseAbs2(), prop.tau);
}

namespace {

void check_dims(const TransferMatrix& m, std::size_t n)
{
    if (static_cast<std::size_t>(m.size()) != n)
        throw ConfigError("density has " + std::to_string(n) + " cells, transfer matrix has " +
                          std::to_string(m.size()));
}

} // namespace

DensityField evolve_density(const TransferMatrix& m, std::span<const double> n0, Exec exec)
{
    check_dims(m, n0.size());
    if (m.is_identity())
        return DensityField(n0.begin(), n0.end());
    const auto& mat = m.matrix();
    const Eigen::Index n = mat.rows();
    DensityField out(static_cast<std::size_t>(n), 0.0);
    Eigen::Map<Eigen::VectorXd> res(out.data(), n);
    if (exec == Exec::serial) {
        for (Eigen::Index b = 0; b < n; ++b)
            if (n0[b] != 0.0)
                res += n0[b] * mat.col(b);
    } else {
        // Row blocks per thread; each entry still accumulates in ascending column order.
#pragma omp parallel
        {
#pragma omp for schedule(static)
            for (Eigen::Index r0 = 0; r0 < n; r0 += 64) {
                const Eigen::Index len = std::min<Eigen::Index>(64, n - r0);
                for (Eigen::Index b = 0; b < n; ++b)
                    if (n0[b] != 0.0)
                        res.segment(r0, len) += n0[b] * mat.col(b).segment(r0, len);
            }
        }
    }
    return out;
}

DensityField evolve_density(const TransferMatrix& m, std::span<const std::uint8_t> n0, Exec exec)
{
    check_dims(m, n0.size());
    if (m.is_identity())
        return DensityField(n0.begin(), n0.end());
    const auto& mat = m.matrix();
    const Eigen::Index n = mat.rows();
    DensityField out(static_cast<std::size_t>(n), 0.0);
    Eigen::Map<Eigen::VectorXd> res(out.data(), n);
    if (exec == Exec::serial) {
        for (Eigen::Index b = 0; b < n; ++b)
            if (n0[b])
                res += mat.col(b);
    } else {
#pragma omp parallel
        {
#pragma omp for schedule(static)
            for (Eigen::Index r0 = 0; r0 < n; r0 += 64) {
                const Eigen::Index len = std::min<Eigen::Index>(64, n - r0);
                for (Eigen::Index b = 0; b < n; ++b)
                    if (n0[b])
                        res.segment(r0, len) += mat.col(b).segment(r0, len);
            }
        }
    }
    return out;
}

void write_transfer_csv(std::ostream& os, const TransferMatrix& m)
{
    const auto& mat = m.matrix();
    const auto old_flags = os.flags();
    const auto old_prec = os.precision();
    os << std::scientific << std::setprecision(16);
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
        for (Eigen::Index c = 0; c < mat.cols(); ++c) {
            if (c)
                os << ',';
            os << mat(r, c);
        }
        os << '\n';
    }
    os.flags(old_flags);
    os.precision(old_prec);
}

} // namespace qgol

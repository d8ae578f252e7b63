#include "qgol/fock_oracle.hpp"

#include "qgol/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace qgol {

FockSpace::FockSpace(int modes) : modes_(modes)
{
    if (modes < 1)
        throw ConfigError("Fock space needs at least one mode");
    if (modes > kMaxFockModes)
        throw CapacityError("Fock oracle supports at most " + std::to_string(kMaxFockModes) + " modes, got " +
                            std::to_string(modes));
    const auto dim = static_cast<Eigen::Index>(dimension());
    annihilators_.reserve(static_cast<std::size_t>(modes));
    creators_.reserve(static_cast<std::size_t>(modes));
    for (int alpha = 0; alpha < modes; ++alpha) {
        const std::uint64_t bit = std::uint64_t{1} << alpha;
        const std::uint64_t lower = bit - 1;
        std::vector<Eigen::Triplet<double>> entries;
        entries.reserve(static_cast<std::size_t>(dim / 2));
        for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(dim); ++k) {
            if (!(k & bit))
                continue;
            const double sign = (std::popcount(k & lower) % 2) ? -1.0 : 1.0;
            entries.emplace_back(static_cast<Eigen::Index>(k ^ bit), static_cast<Eigen::Index>(k), sign);
        }
        SparseOperator a(dim, dim);
        a.setFromTriplets(entries.begin(), entries.end());
        creators_.push_back(a.transpose());
        annihilators_.push_back(std::move(a));
    }
}

SparseOperator FockSpace::number(int alpha) const
{
    return SparseOperator(creator(alpha) * annihilator(alpha));
}

FockState FockSpace::basis_state(std::span<const std::uint8_t> occupations) const
{
    if (occupations.size() != static_cast<std::size_t>(modes_))
        throw ConfigError("occupation vector has " + std::to_string(occupations.size()) + " entries, Fock space has " +
                          std::to_string(modes_) + " modes");
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < occupations.size(); ++i)
        if (occupations[i])
            index |= std::uint64_t{1} << i;
    return basis_state(index);
}

FockState FockSpace::basis_state(std::uint64_t index) const
{
    if (index >= dimension())
        throw ConfigError("basis index out of range");
    FockState v = FockState::Zero(static_cast<Eigen::Index>(dimension()));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

Eigen::MatrixXd full_hamiltonian(const FockSpace& space, const NeighborhoodTable& table)
{
    if (table.cell_count() != space.modes())
        throw ConfigError("neighbourhood table has " + std::to_string(table.cell_count()) + " cells, Fock space has " +
                          std::to_string(space.modes()) + " modes");
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    SparseOperator h(dim, dim);
    for (int a = 0; a < space.modes(); ++a)
        h += space.creator(a) * space.annihilator(a);
    for (int a = 0; a < space.modes(); ++a) {
        for (int b : table.neighbors(a)) {
            h += space.annihilator(a) * space.creator(b);
            h += space.annihilator(b) * space.creator(a);
        }
    }
    return Eigen::MatrixXd(h);
}

FockEvolver::FockEvolver(const Eigen::MatrixXd& hamiltonian)
{
    if (hamiltonian.rows() != hamiltonian.cols())
        throw ConfigError("Hamiltonian must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
    if (solver.info() != Eigen::Success)
        throw NumericError("Hermitian eigensolver did not converge", std::nan(""));
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

FockState FockEvolver::evolve(const FockState& state, double t) const
{
    if (!(t >= 0.0))
        throw ConfigError("evolution time must be >= 0");
    if (state.size() != values_.size())
        throw ConfigError("state dimension does not match Hamiltonian");
    if (t == 0.0)
        return state;
    const Eigen::VectorXd re = vectors_.transpose() * state.real();
    const Eigen::VectorXd im = vectors_.transpose() * state.imag();
    const Eigen::ArrayXd phase = values_.array() * t;
    const Eigen::ArrayXd c = phase.cos();
    const Eigen::ArrayXd s = phase.sin();
    // exp(-i lambda t) (re + i im) = (c re + s im) + i (c im - s re)
    const Eigen::VectorXd out_re = (c * re.array() + s * im.array()).matrix();
    const Eigen::VectorXd out_im = (c * im.array() - s * re.array()).matrix();
    FockState out(state.size());
    out.real() = vectors_ * out_re;
    out.imag() = vectors_ * out_im;
    return out;
}

Eigen::MatrixXcd FockEvolver::propagator(double t) const
{
    const Eigen::ArrayXd phase = values_.array() * t;
    const Eigen::MatrixXd c = vectors_ * phase.cos().matrix().asDiagonal() * vectors_.transpose();
    const Eigen::MatrixXd s = vectors_ * phase.sin().matrix().asDiagonal() * vectors_.transpose();
    Eigen::MatrixXcd u(c.rows(), c.cols());
    u.real() = c;
    u.imag() = -s;
    return u;
}

FockState schrodinger_evolve(const Eigen::MatrixXd& hamiltonian, const FockState& state, double t)
{
    return FockEvolver(hamiltonian).evolve(state, t);
}

std::vector<double> number_expectations(const FockSpace& space, const FockState& state)
{
    if (state.size() != static_cast<Eigen::Index>(space.dimension()))
        throw ConfigError("state dimension does not match Fock space");
    const Eigen::VectorXd re = state.real();
    const Eigen::VectorXd im = state.imag();
    std::vector<double> n(static_cast<std::size_t>(space.modes()));
    for (int a = 0; a < space.modes(); ++a) {
        const Eigen::VectorXd ar = space.annihilator(a) * re;
        const Eigen::VectorXd ai = space.annihilator(a) * im;
        n[static_cast<std::size_t>(a)] = ar.squaredNorm() + ai.squaredNorm();
    }
    return n;
}

FockState RuleOperator::apply(const FockState& v) const
{
    if (static_cast<std::size_t>(v.size()) != dimension_)
        throw ConfigError("vector dimension does not match rule operator");
    FockState out = FockState::Zero(v.size());
    for (const auto& term : terms_)
        out(static_cast<Eigen::Index>(term.output)) += term.evolved_input.dot(v);
    return out;
}

Eigen::MatrixXcd RuleOperator::dense() const
{
    const auto dim = static_cast<Eigen::Index>(dimension_);
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& term : terms_)
        r.row(static_cast<Eigen::Index>(term.output)) += term.evolved_input.adjoint();
    return r;
}

std::optional<RuleOperator::RankOne> RuleOperator::rank_one_form() const
{
    if (terms_.empty())
        return std::nullopt;
    const std::uint64_t out = terms_.front().output;
    FockState phi = FockState::Zero(static_cast<Eigen::Index>(dimension_));
    for (const auto& term : terms_) {
        if (term.output != out)
            return std::nullopt;
        phi += term.evolved_input;
    }
    return RankOne{out, std::move(phi)};
}

RuleOperator build_rule_operator(const FockSpace& space, std::span<const std::vector<std::uint8_t>> trajectory,
                                 const FockEvolver& evolver, double tau)
{
    RuleOperator r;
    r.dimension_ = space.dimension();
    auto index_of = [&](const std::vector<std::uint8_t>& occ) {
        if (occ.size() != static_cast<std::size_t>(space.modes()))
            throw ConfigError("trajectory state size does not match Fock space");
        std::uint64_t k = 0;
        for (std::size_t i = 0; i < occ.size(); ++i)
            if (occ[i])
                k |= std::uint64_t{1} << i;
        return k;
    };
    std::unordered_map<std::uint64_t, std::size_t> seen;
    for (std::size_t k = 0; k + 1 < trajectory.size(); ++k) {
        const std::uint64_t in = index_of(trajectory[k]);
        const std::uint64_t out = index_of(trajectory[k + 1]);
        ++r.addenda_;
        if (auto it = seen.find(in); it != seen.end()) {
            ++r.terms_[it->second].multiplicity;
            ++r.duplicates_;
            continue;
        }
        seen.emplace(in, r.terms_.size());
        r.terms_.push_back({out, in, evolver.evolve(space.basis_state(in), tau), 1});
    }
    return r;
}

std::string to_string(SequenceKind kind)
{
    switch (kind) {
    case SequenceKind::equilibrium:
        return "equilibrium";
    case SequenceKind::epsilon_equilibrium:
        return "epsilon-equilibrium";
    case SequenceKind::cycle:
        return "cycle";
    case SequenceKind::none:
        break;
    }
    return "none";
}

SequenceClass classify_sequence(std::span<const double> xs, double epsilon, std::optional<double> center)
{
    constexpr double tol = 1e-9;
    const std::size_t n = xs.size();
    if (n < 4)
        throw ConfigError("classify_sequence needs at least 4 values");
    if (!(epsilon >= 0.0))
        throw ConfigError("epsilon must be >= 0");
    const std::size_t min_tail = (n + 1) / 2;
    const std::size_t latest_onset = n - min_tail;

    // Eventual constancy.
    {
        std::size_t onset = n - 1;
        while (onset > 0 && std::abs(xs[onset - 1] - xs[n - 1]) <= tol)
            --onset;
        if (onset <= latest_onset)
            return {SequenceKind::equilibrium, onset, 1, xs[n - 1]};
    }

    // Eventual containment in a band of half-width epsilon.
    {
        std::size_t onset = n;
        double lo = xs[n - 1];
        double hi = xs[n - 1];
        double limit = 0.0;
        for (std::size_t i = n; i-- > 0;) {
            lo = std::min(lo, xs[i]);
            hi = std::max(hi, xs[i]);
            const double c = center ? *center : 0.5 * (lo + hi);
            const double dev = std::max(std::abs(hi - c), std::abs(c - lo));
            if (dev > epsilon)
                break;
            onset = i;
            limit = c;
        }
        if (onset <= latest_onset)
            return {SequenceKind::epsilon_equilibrium, onset, 1, limit};
    }

    // Eventual exact periodicity, smallest period first.
    for (std::size_t period = 2; 2 * period <= n; ++period) {
        std::size_t onset = n - period;
        while (onset > 0 && std::abs(xs[onset - 1] - xs[onset - 1 + period]) <= tol)
            --onset;
        if (onset <= latest_onset && n - onset >= 2 * period)
            return {SequenceKind::cycle, onset, period, 0.0};
    }
    return {};
}

} // namespace qgol

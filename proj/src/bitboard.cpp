#include "qgol/bitboard.hpp"

#include "qgol/error.hpp"

#include <array>

namespace qgol {

SmallBoard::SmallBoard(int side, Boundary boundary)
    : side_(side), boundary_(boundary), wrap_(boundary == Boundary::periodic), full_(0), first_col_(0), last_col_(0)
{
    if (side < 2 || side > 8)
        throw UnsupportedWidthError("bit-parallel board supports sides 2..8, got " + std::to_string(side));
    if (wrap_ && side < 3)
        throw ConfigError("periodic boards need side >= 3");
    const int n = side * side;
    full_ = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    for (int r = 0; r < side; ++r) {
        first_col_ |= std::uint64_t{1} << (r * side);
        last_col_ |= std::uint64_t{1} << (r * side + side - 1);
    }
}

std::uint64_t SmallBoard::mirror(std::uint64_t s) const noexcept
{
    std::uint64_t out = 0;
    for (int r = 0; r < side_; ++r)
        for (int c = 0; c < side_; ++c)
            if ((s >> (r * side_ + c)) & 1U)
                out |= std::uint64_t{1} << (r * side_ + side_ - 1 - c);
    return out;
}

SmallQuantumStepper::SmallQuantumStepper(const TransferMatrix& m, const NeighborhoodTable& table, RuleParams rule,
                                         RuleReading reading)
    : cells_(table.cell_count()), identity_(m.is_identity()), sigma_(rule.sigma), reading_(reading)
{
    if (cells_ > 64)
        throw UnsupportedWidthError("integer-encoded stepper needs <= 64 cells");
    if (m.size() != cells_)
        throw ConfigError("transfer matrix and neighbourhood table sizes differ");
    if (!(rule.sigma >= 0.0))
        throw ConfigError("sigma must be >= 0");
    const auto& mat = m.matrix();
    columns_.assign(mat.data(), mat.data() + mat.size());
    offsets_.push_back(0);
    for (int a = 0; a < cells_; ++a) {
        for (int b : table.neighbors(a))
            neighbors_.push_back(b);
        offsets_.push_back(static_cast<int>(neighbors_.size()));
    }
}

std::uint64_t SmallQuantumStepper::step(std::uint64_t s) const
{
    std::array<double, 64> density{};
    if (identity_) {
        for (int a = 0; a < cells_; ++a)
            density[static_cast<std::size_t>(a)] = static_cast<double>((s >> a) & 1U);
    } else {
        for (int b = 0; b < cells_; ++b) {
            if (!((s >> b) & 1U))
                continue;
            const double* col = columns_.data() + static_cast<std::size_t>(b) * static_cast<std::size_t>(cells_);
            for (int a = 0; a < cells_; ++a)
                density[static_cast<std::size_t>(a)] += col[a];
        }
    }
    std::uint64_t next = 0;
    for (int a = 0; a < cells_; ++a) {
        double sum = 0.0;
        for (int k = offsets_[static_cast<std::size_t>(a)]; k < offsets_[static_cast<std::size_t>(a) + 1]; ++k)
            sum += density[static_cast<std::size_t>(neighbors_[static_cast<std::size_t>(k)])];
        const bool alive =
            reading_ == RuleReading::evolved ? density[static_cast<std::size_t>(a)] >= 0.5 : ((s >> a) & 1U) != 0;
        const double lower = alive ? 2.0 - sigma_ : 3.0 - sigma_;
        if (lower <= sum && sum <= 3.0 + sigma_)
            next |= std::uint64_t{1} << a;
    }
    return next;
}

} // namespace qgol

#pragma once

// Integer-encoded kernels for lattices of at most 64 cells (side <= 8), used
// by the exhaustive small-lattice studies. They must agree exactly with the
// reference implementations in engine.hpp, which the tests check.

#include "qgol/engine.hpp"

#include <cstdint>
#include <vector>

namespace qgol {

/// Bit-parallel classical step: all cells at once with a bit-sliced
/// neighbour counter over the eight shifted copies of the board.
class SmallBoard {
public:
    explicit SmallBoard(int side, Boundary boundary = Boundary::fixed);

    int side() const noexcept { return side_; }
    int cell_count() const noexcept { return side_ * side_; }
    Boundary boundary() const noexcept { return boundary_; }
    std::uint64_t full_mask() const noexcept { return full_; }

    std::uint64_t step(std::uint64_t s) const noexcept
    {
        const std::uint64_t w = west(s);
        const std::uint64_t e = east(s);
        const std::uint64_t nb[8] = {w, e, north(s), south(s), north(w), north(e), south(w), south(e)};
        // Count modulo 8 in three bit planes; a count of 8 aliases to 0, which
        // is harmless because only counts 2 and 3 matter.
        std::uint64_t c0 = 0;
        std::uint64_t c1 = 0;
        std::uint64_t c2 = 0;
        for (std::uint64_t x : nb) {
            const std::uint64_t k0 = c0 & x;
            c0 ^= x;
            const std::uint64_t k1 = c1 & k0;
            c1 ^= k0;
            c2 ^= k1;
        }
        return ~c2 & c1 & (c0 | s) & full_;
    }

    /// Left-right mirror of an encoded state.
    std::uint64_t mirror(std::uint64_t s) const noexcept;

private:
    // Each cell receives the value of its neighbour on the named side.
    std::uint64_t west(std::uint64_t s) const noexcept
    {
        std::uint64_t r = (s << 1) & ~first_col_ & full_;
        if (wrap_)
            r |= (s >> (side_ - 1)) & first_col_;
        return r;
    }
    std::uint64_t east(std::uint64_t s) const noexcept
    {
        std::uint64_t r = (s >> 1) & ~last_col_ & full_;
        if (wrap_)
            r |= (s << (side_ - 1)) & last_col_;
        return r;
    }
    std::uint64_t north(std::uint64_t s) const noexcept
    {
        std::uint64_t r = (s << side_) & full_;
        if (wrap_)
            r |= s >> (cell_count() - side_);
        return r;
    }
    std::uint64_t south(std::uint64_t s) const noexcept
    {
        std::uint64_t r = s >> side_;
        if (wrap_)
            r |= (s << (cell_count() - side_)) & full_;
        return r;
    }

    int side_;
    Boundary boundary_;
    bool wrap_;
    std::uint64_t full_;
    std::uint64_t first_col_;
    std::uint64_t last_col_;
};

/// Full pipeline step (transient + sigma-rule) on integer-encoded states.
/// Summation order matches evolve_density / quantum_rule_step, so results
/// are bit-identical to the reference path.
class SmallQuantumStepper {
public:
    SmallQuantumStepper(const TransferMatrix& m, const NeighborhoodTable& table, RuleParams rule,
                        RuleReading reading = RuleReading::evolved);

    std::uint64_t step(std::uint64_t s) const;

private:
    int cells_;
    bool identity_;
    std::vector<double> columns_;  // column-major copy of M
    std::vector<int> offsets_;
    std::vector<int> neighbors_;
    double sigma_;
    RuleReading reading_;
};

} // namespace qgol

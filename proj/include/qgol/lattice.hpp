#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qgol {

/// Square L x L lattice. Whether the borders wrap is a property of the
/// neighbourhood table built on it, not of the lattice.
///
/// Cells are indexed row-major from the top-left corner. The library uses
/// 0-based indices internally; cell alpha = 1 of the usual 1-based labelling
/// is index 0 here and is the least significant bit of the integer encoding.
class LatticeSpec {
public:
    explicit LatticeSpec(int side);

    int side() const noexcept { return side_; }
    int cell_count() const noexcept { return side_ * side_; }

    int index(int row, int col) const noexcept { return row * side_ + col; }
    int row_of(int cell) const noexcept { return cell / side_; }
    int col_of(int cell) const noexcept { return cell % side_; }

    friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

private:
    int side_;
};

/// Per-cell occupation numbers n_alpha in [0, 1].
using DensityField = std::vector<double>;

/// 0/1 cell states on a square lattice.
class BinaryState {
public:
    explicit BinaryState(const LatticeSpec& spec);
    BinaryState(const LatticeSpec& spec, std::vector<std::uint8_t> cells);

    const LatticeSpec& spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return cells_.size(); }

    std::uint8_t operator[](std::size_t i) const noexcept { return cells_[i]; }
    std::uint8_t at(int row, int col) const noexcept { return cells_[spec_.index(row, col)]; }
    void set(std::size_t i, bool alive) noexcept { cells_[i] = alive ? 1 : 0; }
    void set(int row, int col, bool alive) noexcept { set(spec_.index(row, col), alive); }

    std::span<const std::uint8_t> cells() const noexcept { return cells_; }
    std::size_t alive_count() const noexcept;

    /// Occupations as doubles; the density field of a basis state.
    DensityField as_density() const;

    /// Bits packed LSB-first into 64-bit words (cell 0 -> bit 0 of word 0).
    std::vector<std::uint64_t> packed() const;

    friend bool operator==(const BinaryState&, const BinaryState&) = default;

private:
    LatticeSpec spec_;
    std::vector<std::uint8_t> cells_;
};

struct BinaryStateHash {
    std::size_t operator()(const BinaryState& s) const noexcept;
};

/// fixed: cells outside the grid are absent (border cells have fewer
/// neighbours). periodic: rows and columns wrap around (torus).
enum class Boundary { fixed, periodic };

std::string to_string(Boundary boundary);
Boundary parse_boundary(const std::string& text);

/// Moore neighbourhoods (cell excluded) in compressed row form.
///
/// Also used for rectangular grids and chains by the exact Fock-space
/// oracle, which needs mode counts that are not perfect squares.
/// Periodic grids need at least 3 rows and 3 columns so that the eight
/// neighbours are distinct.
class NeighborhoodTable {
public:
    NeighborhoodTable(int rows, int cols, Boundary boundary = Boundary::fixed);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    Boundary boundary() const noexcept { return boundary_; }
    int cell_count() const noexcept { return rows_ * cols_; }

    std::span<const int> neighbors(int cell) const noexcept
    {
        return {indices_.data() + offsets_[cell], indices_.data() + offsets_[cell + 1]};
    }

    /// p_{alpha beta}: 1 iff beta is a Moore neighbour of alpha.
    bool adjacent(int a, int b) const noexcept;

private:
    int rows_;
    int cols_;
    Boundary boundary_;
    std::vector<int> offsets_;
    std::vector<int> indices_;
};

NeighborhoodTable build_neighborhoods(const LatticeSpec& spec, Boundary boundary = Boundary::fixed);

/// Integer label of a state; cell 0 is the least significant bit.
/// Throws UnsupportedWidthError when the lattice has more than 64 cells.
std::uint64_t encode_state(const BinaryState& state);
BinaryState decode_state(const LatticeSpec& spec, std::uint64_t code);

/// Every cell independently alive with probability 1/2.
BinaryState random_state(const LatticeSpec& spec, std::uint64_t seed);

/// Hex form of the integer label, most significant digit first, padded to
/// ceil(cell_count / 4) digits. Defined for any lattice size.
std::string to_hex(const BinaryState& state);
BinaryState from_hex(const LatticeSpec& spec, std::string_view hex);

/// Plain PBM (P1); 1 = alive.
void write_pbm(std::ostream& os, const BinaryState& state);
BinaryState read_pbm(std::istream& is);

} // namespace qgol

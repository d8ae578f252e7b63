#include "qgol/lattice.hpp"

#include "qgol/error.hpp"
#include "qgol/rng.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>

namespace qgol {

LatticeSpec::LatticeSpec(int side) : side_(side)
{
    if (side < 2)
        throw ConfigError("lattice side must be >= 2, got " + std::to_string(side));
}

BinaryState::BinaryState(const LatticeSpec& spec)
    : spec_(spec), cells_(static_cast<std::size_t>(spec.cell_count()), 0)
{
}

BinaryState::BinaryState(const LatticeSpec& spec, std::vector<std::uint8_t> cells)
    : spec_(spec), cells_(std::move(cells))
{
    if (cells_.size() != static_cast<std::size_t>(spec_.cell_count()))
        throw ConfigError("state has " + std::to_string(cells_.size()) + " cells, lattice needs " +
                          std::to_string(spec_.cell_count()));
    for (auto& c : cells_)
        c = c ? 1 : 0;
}

std::size_t BinaryState::alive_count() const noexcept
{
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

DensityField BinaryState::as_density() const
{
    return DensityField(cells_.begin(), cells_.end());
}

std::vector<std::uint64_t> BinaryState::packed() const
{
    std::vector<std::uint64_t> words((cells_.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < cells_.size(); ++i)
        if (cells_[i])
            words[i / 64] |= std::uint64_t{1} << (i % 64);
    return words;
}

std::size_t BinaryStateHash::operator()(const BinaryState& s) const noexcept
{
    std::uint64_t h = static_cast<std::uint64_t>(s.size());
    for (auto w : s.packed())
        h = splitmix64(h ^ w);
    return static_cast<std::size_t>(h);
}

std::string to_string(Boundary boundary) { return boundary == Boundary::fixed ? "fixed" : "periodic"; }

Boundary parse_boundary(const std::string& text)
{
    if (text == "fixed")
        return Boundary::fixed;
    if (text == "periodic")
        return Boundary::periodic;
    throw UsageError("boundary must be fixed or periodic, got `" + text + "`");
}

NeighborhoodTable::NeighborhoodTable(int rows, int cols, Boundary boundary)
    : rows_(rows), cols_(cols), boundary_(boundary)
{
    if (rows < 1 || cols < 1)
        throw ConfigError("grid dimensions must be positive");
    if (boundary == Boundary::periodic && (rows < 3 || cols < 3))
        throw ConfigError("periodic grids need at least 3 rows and 3 columns");
    offsets_.reserve(static_cast<std::size_t>(rows * cols) + 1);
    offsets_.push_back(0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0)
                        continue;
                    int rr = r + dr;
                    int cc = c + dc;
                    if (boundary == Boundary::periodic) {
                        rr = (rr + rows) % rows;
                        cc = (cc + cols) % cols;
                    } else if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) {
                        continue;
                    }
                    indices_.push_back(rr * cols + cc);
                }
            }
            std::sort(indices_.begin() + offsets_.back(), indices_.end());
            offsets_.push_back(static_cast<int>(indices_.size()));
        }
    }
}

bool NeighborhoodTable::adjacent(int a, int b) const noexcept
{
    const auto n = neighbors(a);
    return std::find(n.begin(), n.end(), b) != n.end();
}

NeighborhoodTable build_neighborhoods(const LatticeSpec& spec, Boundary boundary)
{
    return NeighborhoodTable(spec.side(), spec.side(), boundary);
}

std::uint64_t encode_state(const BinaryState& state)
{
    if (state.size() > 64)
        throw UnsupportedWidthError("integer encoding needs <= 64 cells, lattice has " +
                                    std::to_string(state.size()));
    return state.packed().front();
}

BinaryState decode_state(const LatticeSpec& spec, std::uint64_t code)
{
    const int n = spec.cell_count();
    if (n > 64)
        throw UnsupportedWidthError("integer encoding needs <= 64 cells, lattice has " + std::to_string(n));
    if (n < 64 && (code >> n) != 0)
        throw ConfigError("code " + std::to_string(code) + " out of range for " + std::to_string(n) + " cells");
    BinaryState s(spec);
    for (int i = 0; i < n; ++i)
        s.set(static_cast<std::size_t>(i), (code >> i) & 1U);
    return s;
}

BinaryState random_state(const LatticeSpec& spec, std::uint64_t seed)
{
    auto rng = make_rng(seed);
    BinaryState s(spec);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i % 64 == 0)
            word = rng();
        s.set(i, (word >> (i % 64)) & 1U);
    }
    return s;
}

std::string to_hex(const BinaryState& state)
{
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t n = state.size();
    const std::size_t ndigits = (n + 3) / 4;
    std::string out(ndigits, '0');
    for (std::size_t d = 0; d < ndigits; ++d) {
        unsigned nibble = 0;
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t cell = 4 * d + b;
            if (cell < n && state[cell])
                nibble |= 1U << b;
        }
        out[ndigits - 1 - d] = digits[nibble];
    }
    return out;
}

BinaryState from_hex(const LatticeSpec& spec, std::string_view hex)
{
    const auto n = static_cast<std::size_t>(spec.cell_count());
    const std::size_t ndigits = (n + 3) / 4;
    if (hex.size() != ndigits)
        throw ConfigError("hex state has " + std::to_string(hex.size()) + " digits, expected " +
                          std::to_string(ndigits));
    BinaryState s(spec);
    for (std::size_t d = 0; d < ndigits; ++d) {
        const char ch = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[ndigits - 1 - d])));
        unsigned nibble;
        if (ch >= '0' && ch <= '9')
            nibble = static_cast<unsigned>(ch - '0');
        else if (ch >= 'a' && ch <= 'f')
            nibble = static_cast<unsigned>(ch - 'a' + 10);
        else
            throw ConfigError(std::string("invalid hex digit '") + ch + "'");
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t cell = 4 * d + b;
            const bool bit = (nibble >> b) & 1U;
            if (cell < n)
                s.set(cell, bit);
            else if (bit)
                throw ConfigError("hex state has bits beyond the last cell");
        }
    }
    return s;
}

void write_pbm(std::ostream& os, const BinaryState& state)
{
    const int side = state.spec().side();
    os << "P1\n" << side << ' ' << side << '\n';
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            if (c)
                os << ' ';
            os << static_cast<int>(state.at(r, c));
        }
        os << '\n';
    }
}

namespace {

// Next whitespace-separated token, skipping '#' comments.
std::string pbm_token(std::istream& is)
{
    std::string tok;
    char ch;
    while (is.get(ch)) {
        if (ch == '#') {
            std::string ignored;
            std::getline(is, ignored);
            if (!tok.empty())
                break;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!tok.empty())
                break;
            continue;
        }
        tok.push_back(ch);
    }
    return tok;
}

} // namespace

BinaryState read_pbm(std::istream& is)
{
    if (pbm_token(is) != "P1")
        throw ConfigError("not a plain PBM (P1) image");
    int w = 0;
    int h = 0;
    try {
        w = std::stoi(pbm_token(is));
        h = std::stoi(pbm_token(is));
    } catch (const std::exception&) {
        throw ConfigError("malformed PBM header");
    }
    if (w != h)
        throw ConfigError("PBM image must be square, got " + std::to_string(w) + "x" + std::to_string(h));
    LatticeSpec spec(w);
    BinaryState s(spec);
    // Plain PBM allows pixels to be run together without separators.
    std::size_t i = 0;
    char ch;
    while (i < s.size() && is.get(ch)) {
        if (ch == '#') {
            std::string ignored;
            std::getline(is, ignored);
        } else if (ch == '0' || ch == '1') {
            s.set(i++, ch == '1');
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            throw ConfigError(std::string("unexpected character in PBM raster: '") + ch + "'");
        }
    }
    if (i != s.size())
        throw ConfigError("PBM raster truncated");
    return s;
}

} // namespace qgol

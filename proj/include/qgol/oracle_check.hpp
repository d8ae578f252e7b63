#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qgol {

struct OracleCase {
    int rows = 0;
    int cols = 0;
    double max_residual = 0.0;  // max |n_alpha(t) - <N_alpha(t)>| over ICs and times
    std::size_t comparisons = 0;
};

/// Lattice shapes used for the oracle comparison: 1x2, 2x2, 2x3, 3x3
/// (2, 4, 6 and 9 modes).
std::vector<std::pair<int, int>> oracle_shapes();

/// Densities from the transfer matrix versus number expectations after full
/// Fock-space evolution, for `ics` random binary initial states per shape.
OracleCase compare_with_fock(int rows, int cols, std::span<const double> times, std::size_t ics, std::uint64_t seed);

} // namespace qgol

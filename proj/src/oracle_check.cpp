#include "qgol/oracle_check.hpp"

#include "qgol/fock_oracle.hpp"
#include "qgol/lattice.hpp"
#include "qgol/propagator.hpp"
#include "qgol/rng.hpp"

#include <algorithm>
#include <cmath>

namespace qgol {

std::vector<std::pair<int, int>> oracle_shapes() { return {{1, 2}, {2, 2}, {2, 3}, {3, 3}}; }

OracleCase compare_with_fock(int rows, int cols, std::span<const double> times, std::size_t ics, std::uint64_t seed)
{
    const NeighborhoodTable table(rows, cols);
    const int modes = table.cell_count();
    const HoppingSpectrum spectrum(build_single_particle(table));
    const FockSpace space(modes);
    const FockEvolver evolver(full_hamiltonian(space, table));

    OracleCase out;
    out.rows = rows;
    out.cols = cols;
    std::vector<TransferMatrix> transfers;
    for (double t : times)
        transfers.push_back(spectrum.transfer(t));
    for (std::size_t k = 0; k < ics; ++k) {
        auto rng = make_rng(stream_seed(seed, k));
        const std::uint64_t bits = rng();
        std::vector<std::uint8_t> occ(static_cast<std::size_t>(modes));
        for (int a = 0; a < modes; ++a)
            occ[static_cast<std::size_t>(a)] = static_cast<std::uint8_t>((bits >> a) & 1U);
        const FockState psi0 = space.basis_state(occ);
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            const auto single = evolve_density(transfers[ti], std::span<const std::uint8_t>(occ));
            const auto many = number_expectations(space, evolver.evolve(psi0, times[ti]));
            for (int a = 0; a < modes; ++a) {
                out.max_residual = std::max(
                    out.max_residual, std::abs(single[static_cast<std::size_t>(a)] - many[static_cast<std::size_t>(a)]));
                ++out.comparisons;
            }
        }
    }
    return out;
}

} // namespace qgol

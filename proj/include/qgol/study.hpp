#pragma once

#include "qgol/bitboard.hpp"
#include "qgol/engine.hpp"
#include "qgol/parallel.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

namespace qgol {

/// Largest side handled by the exhaustive classical enumeration.
inline constexpr int kMaxEnumerationSide = 5;

/// Successor of every encoded state of a side x side board.
std::vector<std::uint32_t> successor_table(const SmallBoard& board, Exec exec = Exec::parallel);

struct Attractor {
    std::uint32_t canonical = 0;  // smallest encoded state on the cycle
    std::uint16_t period = 0;
    std::uint64_t basin_size = 0;
};

/// Period and transient of every initial condition of a small classical
/// board. Transients are raw: states on a cycle have transient 0.
struct AttractorCatalog {
    int side = 0;
    Boundary boundary = Boundary::periodic;
    std::vector<std::uint16_t> period;
    std::vector<std::uint16_t> transient;
    std::vector<std::uint32_t> attractor;  // index into registry
    std::vector<Attractor> registry;       // sorted by canonical state

    std::size_t size() const noexcept { return period.size(); }
    const Attractor& attractor_of(std::uint32_t ic) const { return registry[attractor[ic]]; }
};

/// Exhaustive classification of all 2^(side^2) initial conditions, side 2..5.
/// Serial: one pass over the functional graph of the successor table.
/// Parallel: independent cycle detection per initial condition over disjoint
/// slices, with the registry merged by canonical state. Both give identical
/// catalogs.
///
/// The small-board study runs on the torus by default: that is the boundary
/// under which the 5x5 automaton has periods {1, 2, 3, 4, 5, 10, 20}.
AttractorCatalog enumerate_classical(int side, Boundary boundary = Boundary::periodic, Exec exec = Exec::serial);

/// Sorted set of periods present in the catalog.
std::vector<int> observed_periods(const AttractorCatalog& catalog);

/// Transients can be reported raw, or with at least one generation counted
/// for initial conditions already on their cycle.
enum class TransientConvention { raw, at_least_one };

struct TransientSummary {
    int period = 0;
    std::uint64_t count = 0;
    double mean = 0.0;
    int min = 0;
    int max = 0;
    std::vector<std::uint64_t> histogram;  // histogram[t] = number of ICs with transient t
};

std::vector<TransientSummary> transient_statistics(const AttractorCatalog& catalog,
                                                   TransientConvention convention = TransientConvention::raw);

/// Alternative groupings of the attractors of one period.
struct PeriodCounts {
    int period = 0;
    std::uint64_t cycles = 0;          // distinct cycles
    std::uint64_t nonempty_cycles = 0; // same, without the all-dead fixed point
    std::uint64_t cycle_states = 0;    // states lying on those cycles
    std::uint64_t symmetry_classes = 0;  // cycles up to the 8 lattice symmetries
    std::uint64_t basin_states = 0;    // initial conditions ending on them
};

std::vector<PeriodCounts> period_counts(const AttractorCatalog& catalog);

/// Image of an encoded state under symmetry g of the square (0..7; 0 =
/// identity, 1..3 rotations, 4..7 reflections). Valid for both boundaries.
std::uint64_t apply_symmetry(std::uint64_t state, int side, int g);

/// Cycle detection on integer states by Brent's method. detected = false if
/// no repeat is found within `max_steps` applications of `step`.
template <class Step>
CycleReport brent_cycle(std::uint64_t initial, Step&& step, std::size_t max_steps)
{
    CycleReport rep;
    std::size_t power = 1;
    std::size_t lam = 1;
    std::size_t steps = 1;
    std::uint64_t tortoise = initial;
    std::uint64_t hare = step(initial);
    while (tortoise != hare) {
        if (steps >= max_steps)
            return rep;
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = step(hare);
        ++lam;
        ++steps;
    }
    tortoise = initial;
    hare = initial;
    for (std::size_t i = 0; i < lam; ++i)
        hare = step(hare);
    std::size_t mu = 0;
    while (tortoise != hare) {
        tortoise = step(tortoise);
        hare = step(hare);
        ++mu;
    }
    rep.transient = mu;
    rep.period = lam;
    rep.detected = true;
    return rep;
}

/// Up to `quota` initial conditions per classical period, drawn uniformly
/// without replacement (reservoir sampling in IC order), sorted ascending.
std::map<int, std::vector<std::uint32_t>> stratified_sample(const AttractorCatalog& catalog, std::size_t quota,
                                                            std::uint64_t seed);

struct SurfaceCell {
    double tau = 0.0;
    double sigma = 0.0;
    int period = 0;  // classical stratum P
    std::size_t sampled = 0;     // N_P
    std::size_t undetected = 0;  // quantum runs with no cycle within the step cap
    bool absent = true;          // no usable sample in this stratum
    double t_p = 0.0;            // mean (T(tau,sigma) - T(0,0))
    double omega_p = 0.0;        // mean (P(tau,sigma) - P(0,0))
};

struct ComparisonSurface {
    std::vector<double> tau_grid;
    std::vector<double> sigma_grid;
    std::vector<int> periods;
    std::vector<SurfaceCell> cells;  // tau-major, then sigma, then period
    std::uint64_t seed = 0;
    std::size_t quota = 0;

    const SurfaceCell& at(std::size_t tau_index, std::size_t sigma_index, std::size_t period_index) const
    {
        return cells[(tau_index * sigma_grid.size() + sigma_index) * periods.size() + period_index];
    }
};

struct SurfaceOptions {
    std::size_t sample_size = 100000;  // split evenly over the observed periods
    std::uint64_t seed = 0;
    std::size_t max_steps = 20000;
    RuleReading reading = RuleReading::evolved;
    Exec exec = Exec::parallel;
};

/// Mean transient and period differences between the quantum pipeline and
/// the classical automaton, per classical period, on a (tau, sigma) grid.
/// Raw transients on both sides.
ComparisonSurface comparison_surfaces(const AttractorCatalog& catalog, std::span<const double> tau_grid,
                                      std::span<const double> sigma_grid, const SurfaceOptions& options = {});

/// Binary sidecar: one 8-byte little-endian record per IC
/// (uint32 IC, uint16 period, uint16 transient).
void write_catalog_binary(std::ostream& os, const AttractorCatalog& catalog);

struct CatalogRecord {
    std::uint32_t ic = 0;
    std::uint16_t period = 0;
    std::uint16_t transient = 0;
};

std::vector<CatalogRecord> read_catalog_binary(std::istream& is);

/// period,cycles,nonempty_cycles,cycle_states,symmetry_classes,basin_states
void write_period_counts_csv(std::ostream& os, std::span<const PeriodCounts> counts);
/// period,count,mean,min,max
void write_transient_csv(std::ostream& os, std::span<const TransientSummary> stats);
/// tau,sigma,P,T_P,Omega_P,N_P,undetected (absent strata: NA)
void write_comparison_csv(std::ostream& os, const ComparisonSurface& surface);

} // namespace qgol

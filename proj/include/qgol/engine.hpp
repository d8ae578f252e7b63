#pragma once

#include "qgol/lattice.hpp"
#include "qgol/parallel.hpp"
#include "qgol/propagator.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qgol {

struct RuleParams {
    double sigma = 0.0;
};

/// How a cell decides which branch of the rule applies to it.
///
/// evolved: the cell counts as alive iff its evolved density n_a(tau) >= 1/2
///          (the rule acts on the evolved state; this is the default).
/// prior:   the cell uses its binary state from before the transient.
///
/// Neighbour sums always use the evolved densities.
enum class RuleReading { evolved, prior };

std::string to_string(RuleReading reading);
RuleReading parse_rule_reading(const std::string& text);

struct RunConfig {
    LatticeSpec spec{33};
    double tau = 0.0;
    RuleParams rule;
    int generations = 4096;
    std::uint64_t seed = 0;
    RuleReading reading = RuleReading::evolved;
};

/// States n^0 .. n^{T-1}, and when recorded the densities n_k(tau) obtained
/// from each state during its Hamiltonian transient.
struct GenerationTrace {
    std::vector<BinaryState> states;
    std::vector<DensityField> densities;

    std::size_t generations() const noexcept { return states.size(); }
};

struct CycleReport {
    std::size_t transient = 0;
    std::size_t period = 0;
    bool detected = false;
};

/// Classical Game of Life step: survive on 2 or 3, birth on 3.
BinaryState classical_rule_step(const BinaryState& state, const NeighborhoodTable& table);

/// One application of the sigma-rule to evolved densities. Alive branch:
/// 1 iff 2 - sigma <= S <= 3 + sigma; dead branch: 1 iff 3 - sigma <= S <= 3 + sigma,
/// with S the sum of the neighbours' evolved densities.
BinaryState quantum_rule_step(std::span<const double> density, const BinaryState& prior, RuleParams rule,
                              const NeighborhoodTable& table, RuleReading reading = RuleReading::evolved);

/// Rule hook for engineered rules: (evolved densities, prior state) -> next state.
using RuleFunction = std::function<BinaryState(const DensityField&, const BinaryState&)>;

struct RunOptions {
    bool keep_densities = true;
    Exec exec = Exec::serial;
};

/// The generation loop: n_k(tau) = M n^k, n^{k+1} = rule(n_k(tau), n^k),
/// repeated until `generations` states are recorded.
GenerationTrace run(const RunConfig& config, const TransferMatrix& m, const BinaryState& initial,
                    const RunOptions& options = {});

GenerationTrace run_with_rule(const TransferMatrix& m, const BinaryState& initial, int generations,
                              const RuleFunction& rule, const RunOptions& options = {});

/// Classical trajectory of the same length, no Hamiltonian stage.
GenerationTrace run_classical(const BinaryState& initial, const NeighborhoodTable& table, int generations);

/// Densities at t = j tau / substeps, j = 0..substeps, inside one transient
/// started from `state`. Sample 0 is the state itself.
std::vector<DensityField> sample_transient(const HoppingSpectrum& spectrum, double tau, const BinaryState& state,
                                           int substeps);

/// First-repeat detection over a recorded trajectory.
CycleReport detect_cycle(std::span<const BinaryState> states);

/// Iterates `step` from `initial` until a state repeats or `max_generations`
/// states have been visited. transient = index of the first visit to the
/// repeated state, period = gap to its second visit.
CycleReport detect_cycle(const BinaryState& initial, const std::function<BinaryState(const BinaryState&)>& step,
                         std::size_t max_generations = 4096);

/// Same on integer-encoded states (<= 64 cells).
CycleReport detect_cycle(std::uint64_t initial, const std::function<std::uint64_t(std::uint64_t)>& step,
                         std::size_t max_generations = 4096);

/// Step function of the full pipeline for cycle detection.
std::function<BinaryState(const BinaryState&)> pipeline_step(const RunConfig& config, const TransferMatrix& m,
                                                              const NeighborhoodTable& table);

} // namespace qgol

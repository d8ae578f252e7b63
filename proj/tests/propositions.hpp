#pragma once

// Engineered rules on the 2x2 lattice for the sequence-shape checks. The
// rule looks only at the prior state and follows a fixed successor map, so
// the trajectory is known in advance. The observable is X = N_0.

#include "qgol/engine.hpp"
#include "qgol/fock_oracle.hpp"
#include "qgol/propagator.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace props {

inline constexpr double kTau = 0.3;

struct EngineeredRun {
    std::vector<std::uint64_t> codes;  // n^0, n^1, ...
    std::vector<double> xs;            // x_1, x_2, ...: <N_0> after each transient
    double fock_residual = 0.0;        // max |x_k - Fock value|
};

inline EngineeredRun run_successor_map(const std::map<std::uint64_t, std::uint64_t>& next, std::uint64_t start,
                                       int generations)
{
    using namespace qgol;
    const LatticeSpec spec(2);
    const auto table = build_neighborhoods(spec);
    const auto m = HoppingSpectrum(build_single_particle(table)).transfer(kTau);
    const auto trace = run_with_rule(
        m, decode_state(spec, start), generations,
        [&](const DensityField&, const BinaryState& prior) {
            return decode_state(spec, next.at(encode_state(prior)));
        });

    const FockSpace space(4);
    const FockEvolver ev(full_hamiltonian(space, table));
    EngineeredRun out;
    for (std::size_t k = 0; k < trace.generations(); ++k) {
        const std::uint64_t code = encode_state(trace.states[k]);
        out.codes.push_back(code);
        out.xs.push_back(trace.densities[k][0]);
        const double fock = number_expectations(space, ev.evolve(space.basis_state(code), kTau))[0];
        out.fock_residual = std::max(out.fock_residual, std::abs(fock - out.xs.back()));
    }
    return out;
}

/// Successor map following `path` and sending its last state to path[back].
inline std::map<std::uint64_t, std::uint64_t> path_rule(const std::vector<std::uint64_t>& path, std::size_t back)
{
    std::map<std::uint64_t, std::uint64_t> next;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        next[path[i]] = path[i + 1];
    next[path.back()] = path[back];
    return next;
}

/// Rule that ignores its input and always returns `target`.
inline std::map<std::uint64_t, std::uint64_t> constant_rule(std::uint64_t target)
{
    std::map<std::uint64_t, std::uint64_t> next;
    for (std::uint64_t s = 0; s < 16; ++s)
        next[s] = target;
    return next;
}

// States with pairwise different (n_0, alive count), hence different x.
inline const std::vector<std::uint64_t> kPath = {0b0000, 0b0001, 0b0010, 0b0011, 0b0110, 0b0111, 0b1110, 0b1111};

} // namespace props

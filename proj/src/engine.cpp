#include "qgol/engine.hpp"

#include "qgol/error.hpp"

#include <unordered_map>

namespace qgol {

std::string to_string(RuleReading reading)
{
    return reading == RuleReading::evolved ? "evolved" : "prior";
}

RuleReading parse_rule_reading(const std::string& text)
{
    if (text == "evolved")
        return RuleReading::evolved;
    if (text == "prior")
        return RuleReading::prior;
    throw UsageError("rule reading must be 'evolved' or 'prior', got '" + text + "'");
}

BinaryState classical_rule_step(const BinaryState& state, const NeighborhoodTable& table)
{
    if (static_cast<int>(state.size()) != table.cell_count())
        throw ConfigError("state and neighbourhood table sizes differ");
    BinaryState next(state.spec());
    for (std::size_t a = 0; a < state.size(); ++a) {
        int sum = 0;
        for (int b : table.neighbors(static_cast<int>(a)))
            sum += state[static_cast<std::size_t>(b)];
        next.set(a, sum == 3 || (state[a] && sum == 2));
    }
    return next;
}

BinaryState quantum_rule_step(std::span<const double> density, const BinaryState& prior, RuleParams rule,
                              const NeighborhoodTable& table, RuleReading reading)
{
    if (density.size() != prior.size() || static_cast<int>(prior.size()) != table.cell_count())
        throw ConfigError("density, state and neighbourhood table sizes differ");
    if (!(rule.sigma >= 0.0))
        throw ConfigError("sigma must be >= 0");
    const double sigma = rule.sigma;
    BinaryState next(prior.spec());
    for (std::size_t a = 0; a < density.size(); ++a) {
        double sum = 0.0;
        for (int b : table.neighbors(static_cast<int>(a)))
            sum += density[static_cast<std::size_t>(b)];
        const bool alive = reading == RuleReading::evolved ? density[a] >= 0.5 : prior[a] != 0;
        const double lower = alive ? 2.0 - sigma : 3.0 - sigma;
        next.set(a, lower <= sum && sum <= 3.0 + sigma);
    }
    return next;
}

GenerationTrace run_with_rule(const TransferMatrix& m, const BinaryState& initial, int generations,
                              const RuleFunction& rule, const RunOptions& options)
{
    if (generations < 1)
        throw ConfigError("generation count must be >= 1");
    if (m.size() != static_cast<int>(initial.size()))
        throw ConfigError("transfer matrix has " + std::to_string(m.size()) + " cells, lattice has " +
                          std::to_string(initial.size()));
    GenerationTrace trace;
    trace.states.reserve(static_cast<std::size_t>(generations));
    trace.states.push_back(initial);
    for (int k = 0; k < generations; ++k) {
        const BinaryState& current = trace.states.back();
        DensityField evolved = evolve_density(m, current.cells(), options.exec);
        if (k + 1 < generations)
            trace.states.push_back(rule(evolved, current));
        if (options.keep_densities)
            trace.densities.push_back(std::move(evolved));
    }
    return trace;
}

GenerationTrace run(const RunConfig& config, const TransferMatrix& m, const BinaryState& initial,
                    const RunOptions& options)
{
    if (!(initial.spec() == config.spec))
        throw ConfigError("initial state lattice does not match the run configuration");
    if (m.tau() != config.tau)
        throw ConfigError("transfer matrix built for tau=" + std::to_string(m.tau()) + ", config has tau=" +
                          std::to_string(config.tau));
    const NeighborhoodTable table = build_neighborhoods(config.spec);
    const RuleParams rule = config.rule;
    const RuleReading reading = config.reading;
    return run_with_rule(
        m, initial, config.generations,
        [&](const DensityField& evolved, const BinaryState& prior) {
            return quantum_rule_step(evolved, prior, rule, table, reading);
        },
        options);
}

GenerationTrace run_classical(const BinaryState& initial, const NeighborhoodTable& table, int generations)
{
    if (generations < 1)
        throw ConfigError("generation count must be >= 1");
    GenerationTrace trace;
    trace.states.reserve(static_cast<std::size_t>(generations));
    trace.states.push_back(initial);
    while (trace.states.size() < static_cast<std::size_t>(generations))
        trace.states.push_back(classical_rule_step(trace.states.back(), table));
    return trace;
}

std::vector<DensityField> sample_transient(const HoppingSpectrum& spectrum, double tau, const BinaryState& state,
                                           int substeps)
{
    if (substeps < 1)
        throw ConfigError("substeps must be >= 1");
    if (!(tau >= 0.0))
        throw ConfigError("transient duration tau must be >= 0");
    std::vector<DensityField> samples;
    samples.reserve(static_cast<std::size_t>(substeps) + 1);
    for (int j = 0; j <= substeps; ++j) {
        const double t = j == substeps ? tau : tau * j / substeps;
        samples.push_back(evolve_density(spectrum.transfer(t), state.cells()));
    }
    return samples;
}

CycleReport detect_cycle(std::span<const BinaryState> states)
{
    std::unordered_map<BinaryState, std::size_t, BinaryStateHash> first_seen;
    first_seen.reserve(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        auto [it, inserted] = first_seen.try_emplace(states[k], k);
        if (!inserted)
            return {it->second, k - it->second, true};
    }
    return {};
}

CycleReport detect_cycle(const BinaryState& initial, const std::function<BinaryState(const BinaryState&)>& step,
                         std::size_t max_generations)
{
    std::unordered_map<BinaryState, std::size_t, BinaryStateHash> first_seen;
    BinaryState current = initial;
    for (std::size_t k = 0; k < max_generations; ++k) {
        auto [it, inserted] = first_seen.try_emplace(current, k);
        if (!inserted)
            return {it->second, k - it->second, true};
        current = step(current);
    }
    return {};
}

CycleReport detect_cycle(std::uint64_t initial, const std::function<std::uint64_t(std::uint64_t)>& step,
                         std::size_t max_generations)
{
    std::unordered_map<std::uint64_t, std::size_t> first_seen;
    std::uint64_t current = initial;
    for (std::size_t k = 0; k < max_generations; ++k) {
        auto [it, inserted] = first_seen.try_emplace(current, k);
        if (!inserted)
            return {it->second, k - it->second, true};
        current = step(current);
    }
    return {};
}

std::function<BinaryState(const BinaryState&)> pipeline_step(const RunConfig& config, const TransferMatrix& m,
                                                              const NeighborhoodTable& table)
{
    return [&m, &table, rule = config.rule, reading = config.reading](const BinaryState& s) {
        const DensityField evolved = evolve_density(m, s.cells());
        return quantum_rule_step(evolved, s, rule, table, reading);
    };
}

} // namespace qgol

#include "xbarmap/mapper.hpp"

#include <cmath>
#include <stdexcept>

namespace xbarmap {

FitnessKind fitness_kind_from_string(const std::string &name)
{
    if (name == "spikes")
    {
        return FitnessKind::spikes;
    }
    if (name == "time")
    {
        return FitnessKind::time;
    }
    if (name == "lifetime")
    {
        return FitnessKind::lifetime;
    }
    throw std::invalid_argument("unknown fitness kind '" + name + "'");
}

std::string to_string(FitnessKind kind)
{
    switch (kind)
    {
    case FitnessKind::spikes:
        return "spikes";
    case FitnessKind::time:
        return "time";
    case FitnessKind::lifetime:
        return "lifetime";
    }
    return "?";
}

double fitness_of(const MappingMetrics &metrics, FitnessKind kind)
{
    switch (kind)
    {
    case FitnessKind::spikes:
        return static_cast<double>(metrics.interconnect_spikes);
    case FitnessKind::time:
        return metrics.execution_time_s;
    case FitnessKind::lifetime:
        return 1.0 / metrics.min_effective_lifetime;
    }
    return 0.0;
}

PsoRunResult run_pso(const ClusterSet &cs, const HardwareModel &hw,
        const PsoConfig &config, FitnessKind fitness_kind,
        PlacementPolicy policy)
{
    hw.validate();
    config.validate();
    if (cs.clusters.empty())
    {
        throw std::invalid_argument("cannot map an empty cluster set");
    }

    const CrossbarProfile profile(hw.geometry, hw.physics);
    Mapping mapping;
    mapping.policy = policy;
    mapping.placements.reserve(cs.clusters.size());
    for (const Cluster &c : cs.clusters)
    {
        mapping.placements.push_back(place_synapses(c, profile, policy));
    }
    mapping.cluster_to_tile.assign(cs.clusters.size(), 0);

    PsoConfig cfg = config;
    if (cfg.velocity_clamp <= 0.0)
    {
        cfg.velocity_clamp = static_cast<double>(hw.tiles) / 2.0;
    }

    PsoRunResult result;
    MappingEvaluator evaluator(cs, hw, profile);
    SwarmState state;

    const FitnessFn fitness = [&](std::span<const double> position) {
        mapping.cluster_to_tile = decode(position, hw.tiles);
        const MappingMetrics metrics = evaluator.evaluate(mapping);
        ArchiveEntry entry;
        entry.fitness_kind = fitness_kind;
        entry.policy = policy;
        entry.iteration = state.iteration;
        entry.seed = cfg.seed;
        entry.assignment = mapping.cluster_to_tile;
        entry.metrics = metrics;
        result.archive.append(std::move(entry));
        return fitness_of(metrics, fitness_kind);
    };

    std::mt19937_64 rng(cfg.seed);
    state = init_swarm(
            cfg, cs.clusters.size(), static_cast<double>(hw.tiles), rng,
            fitness);
    result.g_best_trace.push_back(state.global_best_fitness);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch)
    {
        std::vector<double> window_start = state.local_best_fitness;
        for (std::size_t it = 0; it < cfg.iterations_per_epoch; ++it)
        {
            const double before = state.global_best_fitness;
            pso_step(state, cfg, fitness);
            if (state.global_best_fitness > before)
            {
                throw std::logic_error(
                        "global best fitness increased during a PSO step");
            }
            result.g_best_trace.push_back(state.global_best_fitness);

            if (cfg.convergence_epsilon > 0.0 && cfg.convergence_window > 0 &&
                    (it + 1) % cfg.convergence_window == 0)
            {
                bool all_converged = true;
                for (std::size_t s = 0; s < state.local_best_fitness.size();
                        ++s)
                {
                    if (!(window_start[s] - state.local_best_fitness[s] <
                                cfg.convergence_epsilon))
                    {
                        all_converged = false;
                        break;
                    }
                }
                if (all_converged)
                {
                    break;
                }
                window_start = state.local_best_fitness;
            }
        }
        if (epoch + 1 < cfg.epochs)
        {
            regroup(state, cfg, rng);
        }
    }

    if (!std::isfinite(state.global_best_fitness))
    {
        throw std::runtime_error(
                "PSO found no candidate with finite fitness");
    }
    mapping.cluster_to_tile = decode(state.global_best_position, hw.tiles);
    result.best_metrics = evaluator.evaluate(mapping);
    result.best_fitness = state.global_best_fitness;
    result.best_mapping = std::move(mapping);
    result.discarded = state.discarded;
    return result;
}

} // namespace xbarmap

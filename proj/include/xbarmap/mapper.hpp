#pragma once

#include <cstdint>
#include <vector>

#include "xbarmap/archive.hpp"
#include "xbarmap/metrics.hpp"
#include "xbarmap/partition.hpp"
#include "xbarmap/placement.hpp"
#include "xbarmap/pso.hpp"

namespace xbarmap {

struct PsoRunResult {
    Mapping best_mapping;
    MappingMetrics best_metrics;
    double best_fitness = 0.0;
    SolutionArchive archive;
    // global-best fitness after init and after every iteration; checked to
    // be non-increasing while the run executes
    std::vector<double> g_best_trace;
    std::size_t discarded = 0;
};

// Multi-swarm PSO over cluster-to-tile assignments. Placement per cluster
// is fixed by the policy up front; the swarm searches the tile assignment
// (dims = cluster count). Every evaluated candidate is archived.
// Deterministic for a fixed config seed.
PsoRunResult run_pso(const ClusterSet &cs, const HardwareModel &hw,
        const PsoConfig &config, FitnessKind fitness_kind,
        PlacementPolicy policy);

} // namespace xbarmap

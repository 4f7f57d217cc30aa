#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xbarmap/device_model.hpp"
#include "xbarmap/partition.hpp"

namespace xbarmap {

// Within-crossbar placement policies. All of them honor the crossbar
// structure: each distinct pre neuron owns one wordline, each distinct post
// neuron one bitline, and a synapse sits at their intersection.
//   row_major          neurons take rows/columns in id order
//   performance_first  minimizes sum over synapses of spikes x RESET latency
//   lifetime_first     maximizes the minimum endurance/spikes over cells
enum class PlacementPolicy {
    row_major,
    performance_first,
    lifetime_first,
};

PlacementPolicy placement_policy_from_string(const std::string &name);
std::string to_string(PlacementPolicy policy);

// Cell per internal synapse, parallel to cluster.internal_synapses.
struct CellAssignment {
    std::vector<CellCoordinate> cells;
};

CellAssignment place_synapses(const Cluster &cluster,
        const CrossbarProfile &profile, PlacementPolicy policy);

// A full candidate solution: which crossbar runs each cluster (many
// clusters may time-share one crossbar) and where each cluster's synapses
// sit. Placements depend only on the crossbar profile and policy, so they
// are shared across candidate tile assignments.
struct Mapping {
    std::vector<std::size_t> cluster_to_tile;
    std::vector<CellAssignment> placements;
    PlacementPolicy policy = PlacementPolicy::row_major;
};

} // namespace xbarmap

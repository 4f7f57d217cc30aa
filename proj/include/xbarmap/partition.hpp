#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "xbarmap/workload.hpp"

namespace xbarmap {

// A capacity-bounded sub-network. Internal synapses have both endpoints in
// `neurons` and are the ones programmed into this cluster's crossbar:
// distinct pre neurons occupy wordlines, distinct post neurons bitlines.
struct Cluster {
    std::size_t id = 0;
    std::vector<std::uint32_t> neurons;
    std::vector<Synapse> internal_synapses;
    std::size_t input_count = 0;  // distinct pre endpoints
    std::size_t output_count = 0; // distinct post endpoints
};

struct ClusterSet {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t neuron_count = 0;
    std::vector<Cluster> clusters;
    std::vector<Synapse> cut_synapses;
    std::vector<std::size_t> neuron_to_cluster;

    std::uint64_t total_spikes() const;
};

class UnsplittableNeuronError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Splits the network into clusters that each fit a rows x cols crossbar,
// minimizing the spike count crossing cluster boundaries. Greedy sequential
// growth to capacity seeds the solution; Kernighan-Lin style move/swap
// refinement (seeded candidate order) then reduces the spike-weighted cut.
// The result never cuts more spikes than the plain sequential split.
ClusterSet partition(const SnnNetwork &net, std::size_t rows,
        std::size_t cols, std::uint64_t seed = 0);

std::uint64_t cut_spikes(const ClusterSet &cs);

void write_cluster_set_json(
        const ClusterSet &cs, const std::filesystem::path &path);

} // namespace xbarmap

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace xbarmap {

// One directed connection with its activation count for the whole workload:
// `spikes` is the number of spikes that propagate through the synapse when
// the application runs once.
struct Synapse {
    std::uint32_t pre = 0;
    std::uint32_t post = 0;
    double weight = 0.0;
    std::uint64_t spikes = 0;

    bool operator==(const Synapse &) const = default;
};

struct SnnNetwork {
    std::size_t neuron_count = 0;
    std::vector<Synapse> synapses;

    // Throws std::invalid_argument naming the offending synapse on
    // out-of-range endpoints, self-loops or duplicate (pre, post) pairs.
    void validate() const;

    bool operator==(const SnnNetwork &) const = default;
};

std::uint64_t total_spikes(const SnnNetwork &net);

SnnNetwork load_workload(const std::filesystem::path &path);
void save_workload(const SnnNetwork &net, const std::filesystem::path &path);

enum class TopologyKind {
    feedforward,
    recurrent_reservoir,
    convolutional,
};

// Desk-scale synthetic workload shapes. Feedforward and convolutional use
// layer_sizes; the reservoir uses layer_sizes[0] as its neuron count.
// Activation counts are drawn log-uniformly from [spikes_min, spikes_max].
struct TopologySpec {
    TopologyKind kind = TopologyKind::feedforward;
    std::vector<std::size_t> layer_sizes;
    double density = 1.0;
    std::uint64_t spikes_min = 1;
    std::uint64_t spikes_max = 1000;
    std::uint64_t seed = 0;

    void validate() const;
};

// Deterministic for a fixed spec: equal specs produce bitwise-equal
// networks.
SnnNetwork generate_synthetic(const TopologySpec &spec);

TopologyKind topology_kind_from_string(const std::string &name);
std::string to_string(TopologyKind kind);

} // namespace xbarmap

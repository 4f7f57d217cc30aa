#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "xbarmap/device_model.hpp"
#include "xbarmap/partition.hpp"
#include "xbarmap/placement.hpp"

namespace xbarmap {

// Tiled hardware abstraction: `tiles` identical crossbars behind a shared
// spike interconnect. Energies are stored in joules; the JSON configuration
// carries them in picojoules.
struct HardwareModel {
    std::size_t tiles = 4;
    CrossbarGeometry geometry;
    DevicePhysicsParams physics;
    double energy_per_spike_j = 50e-12;
    double energy_per_route_j = 147e-12;
    double switch_bandwidth_events_per_s = 1.8e9;

    void validate() const;
};

HardwareModel load_hardware_model(const std::filesystem::path &path);
void save_hardware_model(
        const HardwareModel &hw, const std::filesystem::path &path);

struct MappingMetrics {
    double execution_time_s = 0.0;
    double min_effective_lifetime = 0.0;
    double energy_j = 0.0;
    std::uint64_t interconnect_spikes = 0;
};

// Per-cell effective lifetime L = endurance / accumulated activations for
// every programmed cell; cells with no activations are infinite and
// excluded from the minimum.
struct LifetimeResult {
    // tiles x (rows*cols) row-major, +inf where nothing is programmed
    std::vector<std::vector<double>> per_cell;
    double min = 0.0;
};

LifetimeResult effective_lifetime(const Mapping &mapping,
        const ClusterSet &cs, const HardwareModel &hw,
        const CrossbarProfile &profile);

double execution_time(const Mapping &mapping, const ClusterSet &cs,
        const HardwareModel &hw, const CrossbarProfile &profile);

double energy(const Mapping &mapping, const ClusterSet &cs,
        const HardwareModel &hw);

// Spikes of cut synapses whose endpoint clusters run on different tiles.
std::uint64_t interconnect_spikes(const Mapping &mapping, const ClusterSet &cs);

// One-pass evaluation of all four quantities.
MappingMetrics evaluate_mapping(const Mapping &mapping, const ClusterSet &cs,
        const HardwareModel &hw, const CrossbarProfile &profile);

// Same computation with reusable scratch buffers; the optimizer calls this
// once per candidate.
class MappingEvaluator {
public:
    MappingEvaluator(const ClusterSet &cs, const HardwareModel &hw,
            const CrossbarProfile &profile);

    MappingMetrics evaluate(const Mapping &mapping);

private:
    const ClusterSet &cs_;
    const HardwareModel &hw_;
    const CrossbarProfile &profile_;
    std::vector<std::vector<double>> activations_;
    std::vector<std::vector<std::size_t>> touched_;
    std::vector<double> compute_;
    double total_spikes_ = 0.0;
};

} // namespace xbarmap

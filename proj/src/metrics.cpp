#include "xbarmap/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace xbarmap {

namespace {

void check_mapping(const Mapping &mapping, const ClusterSet &cs,
        const HardwareModel &hw)
{
    if (mapping.cluster_to_tile.size() != cs.clusters.size() ||
            mapping.placements.size() != cs.clusters.size())
    {
        throw std::invalid_argument(
                "mapping does not cover every cluster of the cluster set");
    }
    for (std::size_t tile : mapping.cluster_to_tile)
    {
        if (tile >= hw.tiles)
        {
            throw std::invalid_argument("mapping references tile " +
                    std::to_string(tile) + " of a " +
                    std::to_string(hw.tiles) + "-tile hardware model");
        }
    }
}

} // namespace

void HardwareModel::validate() const
{
    if (tiles < 1)
    {
        throw std::invalid_argument("hardware model needs tiles >= 1");
    }
    geometry.validate();
    physics.validate();
    if (energy_per_spike_j < 0.0 || energy_per_route_j < 0.0)
    {
        throw std::invalid_argument("energies must be >= 0");
    }
    if (!(switch_bandwidth_events_per_s > 0.0))
    {
        throw std::invalid_argument("switch bandwidth must be > 0");
    }
}

HardwareModel load_hardware_model(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open hardware file " + path.string());
    }
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw std::runtime_error(
                "failed to parse " + path.string() + ": " + e.what());
    }

    HardwareModel hw;
    try
    {
        hw.tiles = j.value("tiles", hw.tiles);
        hw.geometry.rows = j.value("rows", hw.geometry.rows);
        hw.geometry.cols = j.value("cols", hw.geometry.cols);
        hw.geometry.r_wire_ohm = j.value("r_wire_ohm", hw.geometry.r_wire_ohm);
        hw.geometry.r_cell_ohm = j.value("r_cell_ohm", hw.geometry.r_cell_ohm);
        hw.geometry.v_spike_v = j.value("v_spike_v", hw.geometry.v_spike_v);
        hw.physics.alpha_per_s = j.value("alpha_per_s", hw.physics.alpha_per_s);
        hw.physics.t_melt_k = j.value("t_melt_k", hw.physics.t_melt_k);
        hw.physics.t_ambient_k =
                j.value("t_ambient_k", hw.physics.t_ambient_k);
        hw.physics.k_heat_k_per_a2 =
                j.value("k_heat_k_per_a2", hw.physics.k_heat_k_per_a2);
        hw.physics.gamma_k = j.value("gamma_k", hw.physics.gamma_k);
        hw.physics.vc_target = j.value("vc_target", hw.physics.vc_target);
        hw.energy_per_spike_j =
                j.value("energy_per_spike_pj", hw.energy_per_spike_j * 1e12) *
                1e-12;
        hw.energy_per_route_j =
                j.value("energy_per_route_pj", hw.energy_per_route_j * 1e12) *
                1e-12;
        hw.switch_bandwidth_events_per_s = j.value(
                "switch_bandwidth_events_per_s",
                hw.switch_bandwidth_events_per_s);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw std::runtime_error(
                "malformed hardware model " + path.string() + ": " + e.what());
    }
    hw.validate();
    return hw;
}

void save_hardware_model(
        const HardwareModel &hw, const std::filesystem::path &path)
{
    hw.validate();
    nlohmann::json j;
    j["tiles"] = hw.tiles;
    j["rows"] = hw.geometry.rows;
    j["cols"] = hw.geometry.cols;
    j["r_wire_ohm"] = hw.geometry.r_wire_ohm;
    j["r_cell_ohm"] = hw.geometry.r_cell_ohm;
    j["v_spike_v"] = hw.geometry.v_spike_v;
    j["alpha_per_s"] = hw.physics.alpha_per_s;
    j["t_melt_k"] = hw.physics.t_melt_k;
    j["t_ambient_k"] = hw.physics.t_ambient_k;
    j["k_heat_k_per_a2"] = hw.physics.k_heat_k_per_a2;
    j["gamma_k"] = hw.physics.gamma_k;
    j["vc_target"] = hw.physics.vc_target;
    j["energy_per_spike_pj"] = hw.energy_per_spike_j * 1e12;
    j["energy_per_route_pj"] = hw.energy_per_route_j * 1e12;
    j["switch_bandwidth_events_per_s"] = hw.switch_bandwidth_events_per_s;
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error("cannot write hardware file " + path.string());
    }
    out << j.dump(2) << '\n';
}

LifetimeResult effective_lifetime(const Mapping &mapping,
        const ClusterSet &cs, const HardwareModel &hw,
        const CrossbarProfile &profile)
{
    check_mapping(mapping, cs, hw);
    const std::size_t cells =
            hw.geometry.rows * hw.geometry.cols;
    std::vector<std::vector<double>> activations(
            hw.tiles, std::vector<double>(cells, 0.0));
    for (std::size_t k = 0; k < cs.clusters.size(); ++k)
    {
        const std::size_t tile = mapping.cluster_to_tile[k];
        const Cluster &c = cs.clusters[k];
        const CellAssignment &pl = mapping.placements[k];
        for (std::size_t s = 0; s < c.internal_synapses.size(); ++s)
        {
            const CellCoordinate cell = pl.cells[s];
            activations[tile][cell.row * hw.geometry.cols + cell.col] +=
                    static_cast<double>(c.internal_synapses[s].spikes);
        }
    }

    LifetimeResult result;
    result.min = std::numeric_limits<double>::infinity();
    result.per_cell.assign(hw.tiles,
            std::vector<double>(cells, std::numeric_limits<double>::infinity()));
    for (std::size_t t = 0; t < hw.tiles; ++t)
    {
        for (std::size_t i = 0; i < cells; ++i)
        {
            if (activations[t][i] > 0.0)
            {
                const std::size_t row = i / hw.geometry.cols;
                const std::size_t col = i % hw.geometry.cols;
                const double life =
                        profile.at({row, col}).endurance_cycles /
                        activations[t][i];
                result.per_cell[t][i] = life;
                result.min = std::min(result.min, life);
            }
        }
    }
    return result;
}

std::uint64_t interconnect_spikes(const Mapping &mapping, const ClusterSet &cs)
{
    std::uint64_t sum = 0;
    for (const Synapse &s : cs.cut_synapses)
    {
        const std::size_t tp =
                mapping.cluster_to_tile[cs.neuron_to_cluster[s.pre]];
        const std::size_t tq =
                mapping.cluster_to_tile[cs.neuron_to_cluster[s.post]];
        if (tp != tq)
        {
            sum += s.spikes;
        }
    }
    return sum;
}

double execution_time(const Mapping &mapping, const ClusterSet &cs,
        const HardwareModel &hw, const CrossbarProfile &profile)
{
    check_mapping(mapping, cs, hw);
    std::vector<double> compute(hw.tiles, 0.0);
    for (std::size_t k = 0; k < cs.clusters.size(); ++k)
    {
        const std::size_t tile = mapping.cluster_to_tile[k];
        const Cluster &c = cs.clusters[k];
        const CellAssignment &pl = mapping.placements[k];
        for (std::size_t s = 0; s < c.internal_synapses.size(); ++s)
        {
            compute[tile] +=
                    static_cast<double>(c.internal_synapses[s].spikes) *
                    profile.at(pl.cells[s]).prog_latency_s;
        }
    }
    const double interconnect =
            static_cast<double>(interconnect_spikes(mapping, cs)) /
            hw.switch_bandwidth_events_per_s;
    return *std::max_element(compute.begin(), compute.end()) + interconnect;
}

double energy(const Mapping &mapping, const ClusterSet &cs,
        const HardwareModel &hw)
{
    check_mapping(mapping, cs, hw);
    return static_cast<double>(cs.total_spikes()) * hw.energy_per_spike_j +
            static_cast<double>(interconnect_spikes(mapping, cs)) *
            hw.energy_per_route_j;
}

MappingMetrics evaluate_mapping(const Mapping &mapping, const ClusterSet &cs,
        const HardwareModel &hw, const CrossbarProfile &profile)
{
    return MappingEvaluator(cs, hw, profile).evaluate(mapping);
}

MappingEvaluator::MappingEvaluator(const ClusterSet &cs,
        const HardwareModel &hw, const CrossbarProfile &profile)
        : cs_(cs), hw_(hw), profile_(profile),
          activations_(hw.tiles,
                  std::vector<double>(hw.geometry.rows * hw.geometry.cols, 0.0)),
          touched_(hw.tiles), compute_(hw.tiles, 0.0),
          total_spikes_(static_cast<double>(cs.total_spikes()))
{
    hw.validate();
}

MappingMetrics MappingEvaluator::evaluate(const Mapping &mapping)
{
    check_mapping(mapping, cs_, hw_);
    for (std::size_t t = 0; t < hw_.tiles; ++t)
    {
        for (std::size_t idx : touched_[t])
        {
            activations_[t][idx] = 0.0;
        }
        touched_[t].clear();
        compute_[t] = 0.0;
    }

    // Lifetime needs per-cell accumulation because time-multiplexed
    // clusters can wear the same cell; execution time sums per synapse.
    for (std::size_t k = 0; k < cs_.clusters.size(); ++k)
    {
        const std::size_t tile = mapping.cluster_to_tile[k];
        const Cluster &c = cs_.clusters[k];
        const CellAssignment &pl = mapping.placements[k];
        for (std::size_t s = 0; s < c.internal_synapses.size(); ++s)
        {
            const double spikes =
                    static_cast<double>(c.internal_synapses[s].spikes);
            const CellCoordinate cell = pl.cells[s];
            const std::size_t idx = cell.row * hw_.geometry.cols + cell.col;
            if (activations_[tile][idx] == 0.0)
            {
                touched_[tile].push_back(idx);
            }
            activations_[tile][idx] += spikes;
            compute_[tile] += spikes * profile_.at(cell).prog_latency_s;
        }
    }

    MappingMetrics m;
    m.min_effective_lifetime = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < hw_.tiles; ++t)
    {
        for (std::size_t idx : touched_[t])
        {
            if (activations_[t][idx] > 0.0)
            {
                const double life =
                        profile_.at_path(idx % hw_.geometry.cols +
                                        (hw_.geometry.rows - 1 -
                                                idx / hw_.geometry.cols))
                                .endurance_cycles /
                        activations_[t][idx];
                m.min_effective_lifetime =
                        std::min(m.min_effective_lifetime, life);
            }
        }
    }

    m.interconnect_spikes = interconnect_spikes(mapping, cs_);
    m.execution_time_s =
            *std::max_element(compute_.begin(), compute_.end()) +
            static_cast<double>(m.interconnect_spikes) /
                    hw_.switch_bandwidth_events_per_s;
    m.energy_j = total_spikes_ * hw_.energy_per_spike_j +
            static_cast<double>(m.interconnect_spikes) * hw_.energy_per_route_j;
    return m;
}

} // namespace xbarmap

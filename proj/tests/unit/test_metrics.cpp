#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <set>

#include <doctest.h>

#include "xbarmap/metrics.hpp"
#include "xbarmap/rng.hpp"

using namespace xbarmap;

namespace {

HardwareModel small_hw(std::size_t tiles, std::size_t dim)
{
    HardwareModel hw;
    hw.tiles = tiles;
    hw.geometry.rows = dim;
    hw.geometry.cols = dim;
    return hw;
}

// Two-cluster set over a 4-neuron chain: 0->1 internal to cluster 0,
// 2->3 internal to cluster 1, 1->2 cut.
ClusterSet chain_set(std::uint64_t a01, std::uint64_t a12, std::uint64_t a23)
{
    ClusterSet cs;
    cs.rows = 4;
    cs.cols = 4;
    cs.neuron_count = 4;
    cs.clusters.resize(2);
    cs.clusters[0].id = 0;
    cs.clusters[0].neurons = {0, 1};
    cs.clusters[0].internal_synapses = {{0, 1, 1.0, a01}};
    cs.clusters[0].input_count = 1;
    cs.clusters[0].output_count = 1;
    cs.clusters[1].id = 1;
    cs.clusters[1].neurons = {2, 3};
    cs.clusters[1].internal_synapses = {{2, 3, 1.0, a23}};
    cs.clusters[1].input_count = 1;
    cs.clusters[1].output_count = 1;
    cs.cut_synapses = {{1, 2, 1.0, a12}};
    cs.neuron_to_cluster = {0, 0, 1, 1};
    return cs;
}

Mapping map_to_tiles(const ClusterSet &cs, const CrossbarProfile &prof,
        std::vector<std::size_t> tiles, PlacementPolicy policy)
{
    Mapping m;
    m.policy = policy;
    m.cluster_to_tile = std::move(tiles);
    for (const Cluster &c : cs.clusters)
    {
        m.placements.push_back(place_synapses(c, prof, policy));
    }
    return m;
}

} // namespace

TEST_CASE("effective lifetime is endurance over accumulated activations")
{
    const HardwareModel hw = small_hw(2, 4);
    const CrossbarProfile prof(hw.geometry, hw.physics);
    const ClusterSet cs = chain_set(1000, 1, 1);
    const Mapping m =
            map_to_tiles(cs, prof, {0, 1}, PlacementPolicy::row_major);
    const LifetimeResult lr = effective_lifetime(m, cs, hw, prof);
    // row_major places each single synapse at (0,0)
    const double e00 = prof.at({0, 0}).endurance_cycles;
    CHECK(lr.min == doctest::Approx(e00 / 1000.0));
    CHECK(lr.per_cell[0][0] == doctest::Approx(e00 / 1000.0));
    CHECK(lr.per_cell[1][0] == doctest::Approx(e00 / 1.0));
    CHECK(std::isinf(lr.per_cell[0][1]));
}

TEST_CASE("time-multiplexed clusters accumulate wear on shared cells")
{
    const HardwareModel hw = small_hw(2, 4);
    const CrossbarProfile prof(hw.geometry, hw.physics);
    const ClusterSet cs = chain_set(3, 1, 7);
    // both clusters on tile 0: both row_major placements use cell (0,0)
    const Mapping m =
            map_to_tiles(cs, prof, {0, 0}, PlacementPolicy::row_major);
    const LifetimeResult lr = effective_lifetime(m, cs, hw, prof);
    const double e00 = prof.at({0, 0}).endurance_cycles;
    CHECK(lr.min == doctest::Approx(e00 / 10.0));

    const MappingMetrics metrics = evaluate_mapping(m, cs, hw, prof);
    CHECK(metrics.min_effective_lifetime == doctest::Approx(e00 / 10.0));
}

TEST_CASE("moving the hottest synapse to the long-path corner helps")
{
    const HardwareModel hw = small_hw(1, 128);
    const CrossbarProfile prof(hw.geometry, hw.physics);

    ClusterSet cs;
    cs.rows = 128;
    cs.cols = 128;
    cs.neuron_count = 2;
    cs.clusters.resize(1);
    cs.clusters[0].id = 0;
    cs.clusters[0].neurons = {0, 1};
    cs.clusters[0].internal_synapses = {{0, 1, 1.0, 500}};
    cs.clusters[0].input_count = 1;
    cs.clusters[0].output_count = 1;
    cs.neuron_to_cluster = {0, 0};

    Mapping bottom_left;
    bottom_left.policy = PlacementPolicy::row_major;
    bottom_left.cluster_to_tile = {0};
    bottom_left.placements = {{{CellCoordinate{127, 0}}}};
    Mapping top_right = bottom_left;
    top_right.placements = {{{CellCoordinate{0, 127}}}};

    const MappingMetrics worst = evaluate_mapping(bottom_left, cs, hw, prof);
    const MappingMetrics best = evaluate_mapping(top_right, cs, hw, prof);
    CHECK(best.min_effective_lifetime > worst.min_effective_lifetime);
}

TEST_CASE("execution time model")
{
    const HardwareModel hw = small_hw(2, 4);
    const CrossbarProfile prof(hw.geometry, hw.physics);

    SUBCASE("empty mapping runs in zero time")
    {
        ClusterSet cs;
        cs.rows = 4;
        cs.cols = 4;
        Mapping m;
        CHECK(execution_time(m, cs, hw, prof) == 0.0);
    }

    SUBCASE("a lone synapse costs activations x latency")
    {
        ClusterSet cs = chain_set(10, 0, 0);
        cs.clusters.pop_back();
        cs.cut_synapses.clear();
        cs.neuron_to_cluster = {0, 0};
        const Mapping m =
                map_to_tiles(cs, prof, {0}, PlacementPolicy::row_major);
        const double lat = prof.at({0, 0}).prog_latency_s;
        CHECK(execution_time(m, cs, hw, prof) == doctest::Approx(10.0 * lat));
    }

    SUBCASE("interconnect adds cut spikes over bandwidth")
    {
        const ClusterSet cs = chain_set(1, 900, 1);
        const Mapping split =
                map_to_tiles(cs, prof, {0, 1}, PlacementPolicy::row_major);
        const Mapping together =
                map_to_tiles(cs, prof, {1, 1}, PlacementPolicy::row_major);
        const double t_split = execution_time(split, cs, hw, prof);
        const double t_together = execution_time(together, cs, hw, prof);
        const double lat = prof.at({0, 0}).prog_latency_s;
        CHECK(interconnect_spikes(split, cs) == 900);
        CHECK(interconnect_spikes(together, cs) == 0);
        CHECK(t_split == doctest::Approx(
                                 lat + 900.0 / hw.switch_bandwidth_events_per_s));
        CHECK(t_together == doctest::Approx(2.0 * lat));
    }
}

TEST_CASE("energy follows the two-term spike model")
{
    const HardwareModel hw = small_hw(2, 4);
    const CrossbarProfile prof(hw.geometry, hw.physics);

    // 8 total spikes, none routed
    ClusterSet cs = chain_set(5, 0, 3);
    cs.cut_synapses.clear();
    const Mapping m =
            map_to_tiles(cs, prof, {0, 1}, PlacementPolicy::row_major);
    CHECK(energy(m, cs, hw) == doctest::Approx(8.0 * 50e-12));

    // zero spikes
    ClusterSet zero = chain_set(0, 0, 0);
    const Mapping mz =
            map_to_tiles(zero, prof, {0, 1}, PlacementPolicy::row_major);
    CHECK(energy(mz, zero, hw) == 0.0);

    // 5 routed spikes add 735 pJ
    ClusterSet routed = chain_set(1, 5, 1);
    const Mapping mr =
            map_to_tiles(routed, prof, {0, 1}, PlacementPolicy::row_major);
    const double base = 7.0 * 50e-12;
    CHECK(energy(mr, routed, hw) == doctest::Approx(base + 735e-12));
}

TEST_CASE("lifetime never improves when activations grow")
{
    const HardwareModel hw = small_hw(1, 8);
    const CrossbarProfile prof(hw.geometry, hw.physics);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial)
    {
        ClusterSet cs;
        cs.rows = 8;
        cs.cols = 8;
        cs.neuron_count = 8;
        cs.clusters.resize(1);
        Cluster &c = cs.clusters[0];
        c.id = 0;
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        for (int s = 0; s < 6; ++s)
        {
            const auto pre = static_cast<std::uint32_t>(uniform_below(rng, 4));
            const auto post =
                    static_cast<std::uint32_t>(4 + uniform_below(rng, 4));
            if (seen.insert({pre, post}).second)
            {
                c.internal_synapses.push_back(
                        {pre, post, 1.0, 1 + uniform_below(rng, 50)});
            }
        }
        for (std::uint32_t v = 0; v < 8; ++v)
        {
            c.neurons.push_back(v);
        }
        cs.neuron_to_cluster.assign(8, 0);

        const Mapping m =
                map_to_tiles(cs, prof, {0}, PlacementPolicy::row_major);
        const double before =
                evaluate_mapping(m, cs, hw, prof).min_effective_lifetime;
        const std::size_t pick =
                uniform_below(rng, c.internal_synapses.size());
        ClusterSet grown = cs;
        grown.clusters[0].internal_synapses[pick].spikes += 25;
        const double after =
                evaluate_mapping(m, grown, hw, prof).min_effective_lifetime;
        CHECK(after <= before);
    }
}

TEST_CASE("lifetime_first placement dominates row_major on random clusters")
{
    const HardwareModel hw = small_hw(1, 12);
    const CrossbarProfile prof(hw.geometry, hw.physics);
    std::mt19937_64 rng(41);
    int wins = 0;
    int total = 0;
    for (int trial = 0; trial < 100; ++trial)
    {
        ClusterSet cs;
        cs.rows = 12;
        cs.cols = 12;
        cs.neuron_count = 16;
        cs.clusters.resize(1);
        Cluster &c = cs.clusters[0];
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        const std::size_t n = 3 + uniform_below(rng, 10);
        for (std::size_t s = 0; s < n; ++s)
        {
            const auto pre = static_cast<std::uint32_t>(uniform_below(rng, 8));
            const auto post =
                    static_cast<std::uint32_t>(8 + uniform_below(rng, 8));
            if (seen.insert({pre, post}).second)
            {
                c.internal_synapses.push_back(
                        {pre, post, 1.0, 1 + uniform_below(rng, 1000)});
            }
        }
        for (std::uint32_t v = 0; v < 16; ++v)
        {
            c.neurons.push_back(v);
        }
        cs.neuron_to_cluster.assign(16, 0);

        const Mapping rm =
                map_to_tiles(cs, prof, {0}, PlacementPolicy::row_major);
        const Mapping lf =
                map_to_tiles(cs, prof, {0}, PlacementPolicy::lifetime_first);
        const double l_rm =
                evaluate_mapping(rm, cs, hw, prof).min_effective_lifetime;
        const double l_lf =
                evaluate_mapping(lf, cs, hw, prof).min_effective_lifetime;
        ++total;
        if (l_lf >= l_rm * (1.0 - 1e-12))
        {
            ++wins;
        }
    }
    CHECK(wins >= (total * 95) / 100);
}

TEST_CASE("performance_first is at least as fast as row_major")
{
    const HardwareModel hw = small_hw(1, 10);
    const CrossbarProfile prof(hw.geometry, hw.physics);
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 50; ++trial)
    {
        ClusterSet cs;
        cs.rows = 10;
        cs.cols = 10;
        cs.neuron_count = 12;
        cs.clusters.resize(1);
        Cluster &c = cs.clusters[0];
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        const std::size_t n = 2 + uniform_below(rng, 8);
        for (std::size_t s = 0; s < n; ++s)
        {
            const auto pre = static_cast<std::uint32_t>(uniform_below(rng, 6));
            const auto post =
                    static_cast<std::uint32_t>(6 + uniform_below(rng, 6));
            if (seen.insert({pre, post}).second)
            {
                c.internal_synapses.push_back(
                        {pre, post, 1.0, 1 + uniform_below(rng, 1000)});
            }
        }
        for (std::uint32_t v = 0; v < 12; ++v)
        {
            c.neurons.push_back(v);
        }
        cs.neuron_to_cluster.assign(12, 0);

        const Mapping rm =
                map_to_tiles(cs, prof, {0}, PlacementPolicy::row_major);
        const Mapping pf = map_to_tiles(
                cs, prof, {0}, PlacementPolicy::performance_first);
        const double t_rm = evaluate_mapping(rm, cs, hw, prof).execution_time_s;
        const double t_pf = evaluate_mapping(pf, cs, hw, prof).execution_time_s;
        CHECK(t_pf <= t_rm * (1.0 + 1e-12));
    }
}

TEST_CASE("hardware model JSON round trip and validation")
{
    const auto path =
            std::filesystem::temp_directory_path() / "xbarmap_hw.json";
    HardwareModel hw;
    hw.tiles = 4;
    hw.geometry.rows = 32;
    hw.geometry.cols = 32;
    hw.energy_per_spike_j = 50e-12;
    save_hardware_model(hw, path);
    const HardwareModel back = load_hardware_model(path);
    CHECK(back.tiles == 4);
    CHECK(back.geometry.rows == 32);
    CHECK(back.energy_per_spike_j == doctest::Approx(50e-12));
    CHECK(back.switch_bandwidth_events_per_s == doctest::Approx(1.8e9));
    std::filesystem::remove(path);

    HardwareModel bad;
    bad.tiles = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    // mapping onto a missing tile is rejected
    const HardwareModel ok = small_hw(1, 4);
    const CrossbarProfile prof(ok.geometry, ok.physics);
    const ClusterSet cs = chain_set(1, 1, 1);
    CHECK_THROWS_AS(
            evaluate_mapping(map_to_tiles(cs, prof, {0, 1},
                                     PlacementPolicy::row_major),
                    cs, ok, prof),
            std::invalid_argument);
}

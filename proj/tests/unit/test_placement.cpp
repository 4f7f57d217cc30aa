#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include <doctest.h>

#include "xbarmap/placement.hpp"
#include "xbarmap/rng.hpp"

using namespace xbarmap;

namespace {

CrossbarProfile profile_for(std::size_t rows, std::size_t cols)
{
    CrossbarGeometry g;
    g.rows = rows;
    g.cols = cols;
    return CrossbarProfile(g, DevicePhysicsParams{});
}

Cluster cluster_of(std::size_t neuron_count, std::vector<Synapse> synapses)
{
    Cluster c;
    c.id = 0;
    for (std::uint32_t v = 0; v < neuron_count; ++v)
    {
        c.neurons.push_back(v);
    }
    std::set<std::uint32_t> pres;
    std::set<std::uint32_t> posts;
    for (const Synapse &s : synapses)
    {
        pres.insert(s.pre);
        posts.insert(s.post);
    }
    c.input_count = pres.size();
    c.output_count = posts.size();
    c.internal_synapses = std::move(synapses);
    return c;
}

// Exhaustive enumeration over injective pre->row and post->col maps;
// the independent check of the placement policies.
struct OracleBest {
    double max_min_lifetime = -1.0;
    double min_latency_sum = std::numeric_limits<double>::infinity();
};

void enumerate_maps(std::size_t slots, std::size_t range,
        std::vector<std::size_t> &current, std::vector<bool> &used,
        const std::function<void(const std::vector<std::size_t> &)> &visit)
{
    if (current.size() == slots)
    {
        visit(current);
        return;
    }
    for (std::size_t x = 0; x < range; ++x)
    {
        if (!used[x])
        {
            used[x] = true;
            current.push_back(x);
            enumerate_maps(slots, range, current, used, visit);
            current.pop_back();
            used[x] = false;
        }
    }
}

OracleBest oracle(const Cluster &cluster, const CrossbarProfile &prof)
{
    const std::size_t rows = prof.geometry().rows;
    const std::size_t cols = prof.geometry().cols;
    std::vector<std::uint32_t> pres;
    std::vector<std::uint32_t> posts;
    for (const Synapse &s : cluster.internal_synapses)
    {
        pres.push_back(s.pre);
        posts.push_back(s.post);
    }
    std::sort(pres.begin(), pres.end());
    pres.erase(std::unique(pres.begin(), pres.end()), pres.end());
    std::sort(posts.begin(), posts.end());
    posts.erase(std::unique(posts.begin(), posts.end()), posts.end());

    const auto pre_slot = [&](std::uint32_t id) {
        return static_cast<std::size_t>(
                std::lower_bound(pres.begin(), pres.end(), id) - pres.begin());
    };
    const auto post_slot = [&](std::uint32_t id) {
        return static_cast<std::size_t>(
                std::lower_bound(posts.begin(), posts.end(), id) -
                posts.begin());
    };

    OracleBest best;
    std::vector<std::size_t> sigma;
    std::vector<bool> used_rows(rows, false);
    enumerate_maps(pres.size(), rows, sigma, used_rows,
            [&](const std::vector<std::size_t> &rows_of) {
                std::vector<std::size_t> tau;
                std::vector<bool> used_cols(cols, false);
                enumerate_maps(posts.size(), cols, tau, used_cols,
                        [&](const std::vector<std::size_t> &cols_of) {
                            double min_life =
                                    std::numeric_limits<double>::infinity();
                            double lat_sum = 0.0;
                            for (const Synapse &s : cluster.internal_synapses)
                            {
                                const CellCoordinate cell{
                                        rows_of[pre_slot(s.pre)],
                                        cols_of[post_slot(s.post)]};
                                const CellProfile &cp = prof.at(cell);
                                min_life = std::min(min_life,
                                        cp.endurance_cycles /
                                                static_cast<double>(s.spikes));
                                lat_sum += static_cast<double>(s.spikes) *
                                        cp.prog_latency_s;
                            }
                            best.max_min_lifetime =
                                    std::max(best.max_min_lifetime, min_life);
                            best.min_latency_sum =
                                    std::min(best.min_latency_sum, lat_sum);
                        });
            });
    return best;
}

double placed_min_lifetime(const Cluster &cluster, const CrossbarProfile &prof,
        const CellAssignment &assignment)
{
    double min_life = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < cluster.internal_synapses.size(); ++s)
    {
        min_life = std::min(min_life,
                prof.at(assignment.cells[s]).endurance_cycles /
                        static_cast<double>(
                                cluster.internal_synapses[s].spikes));
    }
    return min_life;
}

double placed_latency_sum(const Cluster &cluster, const CrossbarProfile &prof,
        const CellAssignment &assignment)
{
    double sum = 0.0;
    for (std::size_t s = 0; s < cluster.internal_synapses.size(); ++s)
    {
        sum += static_cast<double>(cluster.internal_synapses[s].spikes) *
                prof.at(assignment.cells[s]).prog_latency_s;
    }
    return sum;
}

void check_structure(const Cluster &cluster, const CellAssignment &assignment)
{
    // injective cells, one row per pre, one column per post
    std::set<std::pair<std::size_t, std::size_t>> cells;
    std::map<std::uint32_t, std::size_t> row_of;
    std::map<std::uint32_t, std::size_t> col_of;
    for (std::size_t s = 0; s < cluster.internal_synapses.size(); ++s)
    {
        const Synapse &syn = cluster.internal_synapses[s];
        const CellCoordinate cell = assignment.cells[s];
        CHECK(cells.insert({cell.row, cell.col}).second);
        if (row_of.contains(syn.pre))
        {
            CHECK(row_of[syn.pre] == cell.row);
        }
        row_of[syn.pre] = cell.row;
        if (col_of.contains(syn.post))
        {
            CHECK(col_of[syn.post] == cell.col);
        }
        col_of[syn.post] = cell.col;
    }
    std::set<std::size_t> rows_used;
    for (const auto &[pre, row] : row_of)
    {
        CHECK(rows_used.insert(row).second);
    }
    std::set<std::size_t> cols_used;
    for (const auto &[post, col] : col_of)
    {
        CHECK(cols_used.insert(col).second);
    }
}

} // namespace

TEST_CASE("single synapse on a 1x1 crossbar lands on (0,0) for every policy")
{
    const CrossbarProfile prof = profile_for(1, 1);
    const Cluster c = cluster_of(2, {{0, 1, 1.0, 7}});
    for (PlacementPolicy p : {PlacementPolicy::row_major,
                 PlacementPolicy::performance_first,
                 PlacementPolicy::lifetime_first})
    {
        const CellAssignment a = place_synapses(c, prof, p);
        REQUIRE(a.cells.size() == 1);
        CHECK(a.cells[0] == CellCoordinate{0, 0});
    }
}

TEST_CASE("row_major fills rows and columns in neuron id order")
{
    const CrossbarProfile prof = profile_for(4, 4);
    const Cluster c = cluster_of(
            4, {{0, 2, 1.0, 5}, {0, 3, 1.0, 2}, {1, 2, 1.0, 9}});
    const CellAssignment a =
            place_synapses(c, prof, PlacementPolicy::row_major);
    CHECK(a.cells[0] == CellCoordinate{0, 0}); // pre 0, post 2
    CHECK(a.cells[1] == CellCoordinate{0, 1}); // pre 0, post 3
    CHECK(a.cells[2] == CellCoordinate{1, 0}); // pre 1, post 2
    check_structure(c, a);
}

TEST_CASE("lifetime_first favors the high-endurance row for hot synapses")
{
    // Both synapses share the output neuron, so the only freedom is which
    // pre gets which wordline. Row 0 has the longer path on a 2x2 crossbar.
    const CrossbarProfile prof = profile_for(2, 2);
    const Cluster c = cluster_of(3, {{0, 2, 1.0, 10}, {1, 2, 1.0, 1}});
    const CellAssignment a =
            place_synapses(c, prof, PlacementPolicy::lifetime_first);
    check_structure(c, a);
    CHECK(a.cells[0].row == 0);
    CHECK(a.cells[1].row == 1);

    // enumerating both assignments confirms the choice
    const OracleBest best = oracle(c, prof);
    CHECK(placed_min_lifetime(c, prof, a) ==
            doctest::Approx(best.max_min_lifetime).epsilon(1e-12));
}

TEST_CASE("wordline constraint binds synapses of one pre to one row")
{
    const CrossbarProfile prof = profile_for(6, 6);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial)
    {
        std::vector<Synapse> synapses;
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        const std::size_t n = 2 + uniform_below(rng, 8);
        for (std::size_t s = 0; s < n; ++s)
        {
            const auto pre = static_cast<std::uint32_t>(uniform_below(rng, 4));
            const auto post =
                    static_cast<std::uint32_t>(4 + uniform_below(rng, 4));
            if (seen.insert({pre, post}).second)
            {
                synapses.push_back(
                        {pre, post, 1.0, 1 + uniform_below(rng, 1000)});
            }
        }
        const Cluster c = cluster_of(8, synapses);
        for (PlacementPolicy p : {PlacementPolicy::row_major,
                     PlacementPolicy::performance_first,
                     PlacementPolicy::lifetime_first})
        {
            check_structure(c, place_synapses(c, prof, p));
        }
    }
}

TEST_CASE("capacity violations are rejected")
{
    const CrossbarProfile prof = profile_for(2, 2);
    const Cluster c = cluster_of(
            6, {{0, 3, 1.0, 1}, {1, 4, 1.0, 1}, {2, 5, 1.0, 1}});
    CHECK_THROWS_AS(place_synapses(c, prof, PlacementPolicy::row_major),
            std::invalid_argument);
}

TEST_CASE("lifetime_first matches the max-min enumeration oracle")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial)
    {
        const std::size_t n = 2 + uniform_below(rng, 4); // 2..5
        const std::size_t dim = n + uniform_below(rng, 5 - n + 1); // n..5
        std::vector<Synapse> synapses;
        for (std::uint32_t s = 0; s < n; ++s)
        {
            synapses.push_back({s, static_cast<std::uint32_t>(n + s), 1.0,
                    1 + uniform_below(rng, 1000)});
        }
        const Cluster c = cluster_of(2 * n, synapses);
        const CrossbarProfile prof = profile_for(dim, dim);
        const CellAssignment a =
                place_synapses(c, prof, PlacementPolicy::lifetime_first);
        check_structure(c, a);
        const OracleBest best = oracle(c, prof);
        CHECK(placed_min_lifetime(c, prof, a) ==
                doctest::Approx(best.max_min_lifetime).epsilon(1e-12));
    }
}

TEST_CASE("performance_first matches the min latency-sum enumeration oracle")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial)
    {
        const std::size_t n = 2 + uniform_below(rng, 4);
        const std::size_t dim = n + uniform_below(rng, 5 - n + 1);
        std::vector<Synapse> synapses;
        for (std::uint32_t s = 0; s < n; ++s)
        {
            synapses.push_back({s, static_cast<std::uint32_t>(n + s), 1.0,
                    1 + uniform_below(rng, 1000)});
        }
        const Cluster c = cluster_of(2 * n, synapses);
        const CrossbarProfile prof = profile_for(dim, dim);
        const CellAssignment a =
                place_synapses(c, prof, PlacementPolicy::performance_first);
        check_structure(c, a);
        const OracleBest best = oracle(c, prof);
        CHECK(placed_latency_sum(c, prof, a) ==
                doctest::Approx(best.min_latency_sum).epsilon(1e-12));
    }
}

TEST_CASE("empty cluster places nothing")
{
    const CrossbarProfile prof = profile_for(4, 4);
    const Cluster c = cluster_of(2, {});
    for (PlacementPolicy p : {PlacementPolicy::row_major,
                 PlacementPolicy::performance_first,
                 PlacementPolicy::lifetime_first})
    {
        CHECK(place_synapses(c, prof, p).cells.empty());
    }
}

TEST_CASE("policy names round-trip")
{
    for (PlacementPolicy p : {PlacementPolicy::row_major,
                 PlacementPolicy::performance_first,
                 PlacementPolicy::lifetime_first})
    {
        CHECK(placement_policy_from_string(to_string(p)) == p);
    }
    CHECK_THROWS_AS(placement_policy_from_string("x"), std::invalid_argument);
}

// ---- partitioned production-shape clusters ---------------------------

#include "xbarmap/partition.hpp"
#include "xbarmap/workload.hpp"

TEST_CASE("optimizing policies beat row_major on partitioned clusters")
{
    TopologySpec spec;
    spec.kind = TopologyKind::recurrent_reservoir;
    spec.layer_sizes = {96};
    spec.density = 0.14;
    spec.seed = 77;
    const SnnNetwork net = generate_synthetic(spec);
    const ClusterSet cs = partition(net, 32, 32, 77);
    REQUIRE(cs.clusters.size() >= 2);

    const CrossbarProfile prof = profile_for(32, 32);
    for (const Cluster &c : cs.clusters)
    {
        REQUIRE(c.internal_synapses.size() > 48); // the large-cluster paths

        const CellAssignment rm =
                place_synapses(c, prof, PlacementPolicy::row_major);
        const CellAssignment lf =
                place_synapses(c, prof, PlacementPolicy::lifetime_first);
        const CellAssignment pf =
                place_synapses(c, prof, PlacementPolicy::performance_first);
        check_structure(c, rm);
        check_structure(c, lf);
        check_structure(c, pf);

        CHECK(placed_min_lifetime(c, prof, lf) >=
                placed_min_lifetime(c, prof, rm) * (1.0 - 1e-12));
        CHECK(placed_latency_sum(c, prof, pf) <=
                placed_latency_sum(c, prof, rm) * (1.0 + 1e-12));
    }
}

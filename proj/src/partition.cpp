#include "xbarmap/partition.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "xbarmap/rng.hpp"

namespace xbarmap {

namespace {

struct Adjacency {
    // (neighbor, spikes) per direction
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> out;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> in;
};

constexpr std::size_t kNoCluster = static_cast<std::size_t>(-1);

// Incremental capacity bookkeeping for one cluster under construction.
struct ClusterStats {
    std::unordered_map<std::uint32_t, std::uint32_t> pre_deg;
    std::unordered_map<std::uint32_t, std::uint32_t> post_deg;
    std::size_t input_count = 0;
    std::size_t output_count = 0;
    std::size_t syn_count = 0;
    std::size_t size = 0;
};

class Partitioner {
public:
    Partitioner(const SnnNetwork &net, std::size_t rows, std::size_t cols,
            std::uint64_t seed)
            : net_(net), rows_(rows), cols_(cols), rng_(seed),
              membership_(net.neuron_count, kNoCluster)
    {
        adj_.out.resize(net.neuron_count);
        adj_.in.resize(net.neuron_count);
        for (const Synapse &s : net.synapses)
        {
            adj_.out[s.pre].emplace_back(s.post, s.spikes);
            adj_.in[s.post].emplace_back(s.pre, s.spikes);
        }
        for (std::uint32_t v = 0; v < net.neuron_count; ++v)
        {
            if (adj_.in[v].size() > rows_)
            {
                throw UnsplittableNeuronError("neuron " + std::to_string(v) +
                        " has fan-in " + std::to_string(adj_.in[v].size()) +
                        " exceeding the " + std::to_string(rows_) +
                        " crossbar rows");
            }
        }
    }

    ClusterSet run()
    {
        grow_sequential();
        refine();
        return finalize();
    }

private:
    bool feasible_add(const ClusterStats &cs, std::uint32_t v) const
    {
        std::size_t add_in = 0;
        std::size_t add_out = 0;
        std::size_t add_syn = 0;
        bool v_is_pre = false;
        bool v_is_post = false;
        for (const auto &[u, spikes] : adj_.out[v])
        {
            if (member_of(u) == &cs)
            {
                ++add_syn;
                v_is_pre = true;
                if (!cs.post_deg.contains(u))
                {
                    ++add_out;
                }
            }
        }
        for (const auto &[u, spikes] : adj_.in[v])
        {
            if (member_of(u) == &cs)
            {
                ++add_syn;
                v_is_post = true;
                if (!cs.pre_deg.contains(u))
                {
                    ++add_in;
                }
            }
        }
        if (v_is_pre && !cs.pre_deg.contains(v))
        {
            ++add_in;
        }
        if (v_is_post && !cs.post_deg.contains(v))
        {
            ++add_out;
        }
        return cs.input_count + add_in <= rows_ &&
                cs.output_count + add_out <= cols_ &&
                cs.syn_count + add_syn <= rows_ * cols_;
    }

    void bump(std::unordered_map<std::uint32_t, std::uint32_t> &deg,
            std::size_t &count, std::uint32_t key, int delta)
    {
        auto &d = deg[key];
        if (delta > 0)
        {
            if (d == 0)
            {
                ++count;
            }
            ++d;
        }
        else
        {
            --d;
            if (d == 0)
            {
                --count;
                deg.erase(key);
            }
        }
    }

    void add(std::size_t cid, std::uint32_t v)
    {
        ClusterStats &cs = stats_[cid];
        membership_[v] = cid;
        ++cs.size;
        for (const auto &[u, spikes] : adj_.out[v])
        {
            if (membership_[u] == cid && u != v)
            {
                ++cs.syn_count;
                bump(cs.pre_deg, cs.input_count, v, +1);
                bump(cs.post_deg, cs.output_count, u, +1);
            }
        }
        for (const auto &[u, spikes] : adj_.in[v])
        {
            if (membership_[u] == cid && u != v)
            {
                ++cs.syn_count;
                bump(cs.pre_deg, cs.input_count, u, +1);
                bump(cs.post_deg, cs.output_count, v, +1);
            }
        }
    }

    void remove(std::uint32_t v)
    {
        const std::size_t cid = membership_[v];
        ClusterStats &cs = stats_[cid];
        for (const auto &[u, spikes] : adj_.out[v])
        {
            if (membership_[u] == cid && u != v)
            {
                --cs.syn_count;
                bump(cs.pre_deg, cs.input_count, v, -1);
                bump(cs.post_deg, cs.output_count, u, -1);
            }
        }
        for (const auto &[u, spikes] : adj_.in[v])
        {
            if (membership_[u] == cid && u != v)
            {
                --cs.syn_count;
                bump(cs.pre_deg, cs.input_count, u, -1);
                bump(cs.post_deg, cs.output_count, v, -1);
            }
        }
        membership_[v] = kNoCluster;
        --cs.size;
    }

    const ClusterStats *member_of(std::uint32_t u) const
    {
        return membership_[u] == kNoCluster ? nullptr : &stats_[membership_[u]];
    }

    // Spike weight between v and the current members of cluster cid,
    // both directions, v itself excluded.
    std::uint64_t weight_to(std::uint32_t v, std::size_t cid) const
    {
        std::uint64_t w = 0;
        for (const auto &[u, spikes] : adj_.out[v])
        {
            if (membership_[u] == cid && u != v)
            {
                w += spikes;
            }
        }
        for (const auto &[u, spikes] : adj_.in[v])
        {
            if (membership_[u] == cid && u != v)
            {
                w += spikes;
            }
        }
        return w;
    }

    void grow_sequential()
    {
        stats_.emplace_back();
        for (std::uint32_t v = 0; v < net_.neuron_count; ++v)
        {
            if (feasible_add(stats_.back(), v))
            {
                add(stats_.size() - 1, v);
            }
            else
            {
                stats_.emplace_back();
                add(stats_.size() - 1, v);
            }
        }
    }

    // Candidate target clusters for v: clusters of its neighbors.
    std::vector<std::size_t> neighbor_clusters(std::uint32_t v) const
    {
        std::vector<std::size_t> cids;
        for (const auto &[u, spikes] : adj_.out[v])
        {
            if (membership_[u] != membership_[v])
            {
                cids.push_back(membership_[u]);
            }
        }
        for (const auto &[u, spikes] : adj_.in[v])
        {
            if (membership_[u] != membership_[v])
            {
                cids.push_back(membership_[u]);
            }
        }
        std::sort(cids.begin(), cids.end());
        cids.erase(std::unique(cids.begin(), cids.end()), cids.end());
        return cids;
    }

    bool move_pass(const std::vector<std::uint32_t> &order)
    {
        bool improved = false;
        for (std::uint32_t v : order)
        {
            const std::size_t src = membership_[v];
            const std::uint64_t internal = weight_to(v, src);
            std::size_t best_cid = kNoCluster;
            std::int64_t best_gain = 0;
            for (std::size_t cid : neighbor_clusters(v))
            {
                const std::int64_t gain =
                        static_cast<std::int64_t>(weight_to(v, cid)) -
                        static_cast<std::int64_t>(internal);
                if (gain > best_gain && feasible_add(stats_[cid], v))
                {
                    best_gain = gain;
                    best_cid = cid;
                }
            }
            if (best_cid != kNoCluster)
            {
                remove(v);
                add(best_cid, v);
                improved = true;
            }
        }
        return improved;
    }

    bool swap_pass(const std::vector<std::uint32_t> &boundary)
    {
        bool improved = false;
        for (std::size_t i = 0; i < boundary.size(); ++i)
        {
            for (std::size_t j = i + 1; j < boundary.size(); ++j)
            {
                const std::uint32_t u = boundary[i];
                const std::uint32_t w = boundary[j];
                const std::size_t a = membership_[u];
                const std::size_t b = membership_[w];
                if (a == b)
                {
                    continue;
                }
                remove(u);
                remove(w);
                const std::int64_t gain =
                        static_cast<std::int64_t>(weight_to(u, b)) -
                        static_cast<std::int64_t>(weight_to(u, a)) +
                        static_cast<std::int64_t>(weight_to(w, a)) -
                        static_cast<std::int64_t>(weight_to(w, b));
                if (gain > 0 && feasible_add(stats_[b], u) &&
                        feasible_add(stats_[a], w))
                {
                    add(b, u);
                    add(a, w);
                    improved = true;
                }
                else
                {
                    add(a, u);
                    add(b, w);
                }
            }
        }
        return improved;
    }

    void refine()
    {
        constexpr int kMaxPasses = 50;
        std::vector<std::uint32_t> order(net_.neuron_count);
        for (std::uint32_t v = 0; v < net_.neuron_count; ++v)
        {
            order[v] = v;
        }
        for (int pass = 0; pass < kMaxPasses; ++pass)
        {
            shuffle_vector(order, rng_);
            bool improved = move_pass(order);

            std::vector<std::uint32_t> boundary;
            for (std::uint32_t v : order)
            {
                for (std::size_t cid : neighbor_clusters(v))
                {
                    (void)cid;
                    boundary.push_back(v);
                    break;
                }
            }
            improved |= swap_pass(boundary);
            if (!improved)
            {
                break;
            }
        }
    }

    ClusterSet finalize() const
    {
        // Renumber alive clusters in order of their lowest neuron id.
        std::unordered_map<std::size_t, std::size_t> renum;
        std::vector<std::size_t> order;
        for (std::uint32_t v = 0; v < net_.neuron_count; ++v)
        {
            if (!renum.contains(membership_[v]))
            {
                renum[membership_[v]] = order.size();
                order.push_back(membership_[v]);
            }
        }

        ClusterSet cs;
        cs.rows = rows_;
        cs.cols = cols_;
        cs.neuron_count = net_.neuron_count;
        cs.clusters.resize(order.size());
        cs.neuron_to_cluster.resize(net_.neuron_count);
        for (std::size_t k = 0; k < order.size(); ++k)
        {
            cs.clusters[k].id = k;
        }
        for (std::uint32_t v = 0; v < net_.neuron_count; ++v)
        {
            const std::size_t k = renum.at(membership_[v]);
            cs.neuron_to_cluster[v] = k;
            cs.clusters[k].neurons.push_back(v);
        }
        for (const Synapse &s : net_.synapses)
        {
            const std::size_t kp = cs.neuron_to_cluster[s.pre];
            const std::size_t kq = cs.neuron_to_cluster[s.post];
            if (kp == kq)
            {
                cs.clusters[kp].internal_synapses.push_back(s);
            }
            else
            {
                cs.cut_synapses.push_back(s);
            }
        }
        for (Cluster &c : cs.clusters)
        {
            std::unordered_map<std::uint32_t, bool> pres;
            std::unordered_map<std::uint32_t, bool> posts;
            for (const Synapse &s : c.internal_synapses)
            {
                pres[s.pre] = true;
                posts[s.post] = true;
            }
            c.input_count = pres.size();
            c.output_count = posts.size();
        }
        return cs;
    }

    const SnnNetwork &net_;
    std::size_t rows_;
    std::size_t cols_;
    std::mt19937_64 rng_;
    Adjacency adj_;
    std::vector<std::size_t> membership_;
    std::vector<ClusterStats> stats_;
};

} // namespace

std::uint64_t ClusterSet::total_spikes() const
{
    std::uint64_t sum = 0;
    for (const Cluster &c : clusters)
    {
        for (const Synapse &s : c.internal_synapses)
        {
            sum += s.spikes;
        }
    }
    for (const Synapse &s : cut_synapses)
    {
        sum += s.spikes;
    }
    return sum;
}

ClusterSet partition(const SnnNetwork &net, std::size_t rows,
        std::size_t cols, std::uint64_t seed)
{
    if (rows < 1 || cols < 1)
    {
        throw std::invalid_argument("crossbar must have rows, cols >= 1");
    }
    net.validate();
    if (net.neuron_count == 0)
    {
        return ClusterSet{rows, cols, 0, {}, {}, {}};
    }
    return Partitioner(net, rows, cols, seed).run();
}

std::uint64_t cut_spikes(const ClusterSet &cs)
{
    std::uint64_t sum = 0;
    for (const Synapse &s : cs.cut_synapses)
    {
        sum += s.spikes;
    }
    return sum;
}

void write_cluster_set_json(
        const ClusterSet &cs, const std::filesystem::path &path)
{
    nlohmann::json j;
    j["rows"] = cs.rows;
    j["cols"] = cs.cols;
    j["clusters"] = nlohmann::json::array();
    for (const Cluster &c : cs.clusters)
    {
        nlohmann::json jc;
        jc["id"] = c.id;
        jc["neurons"] = c.neurons;
        jc["internal_synapses"] = c.internal_synapses.size();
        jc["input_count"] = c.input_count;
        jc["output_count"] = c.output_count;
        j["clusters"].push_back(jc);
    }
    j["cut_synapses"] = nlohmann::json::array();
    for (const Synapse &s : cs.cut_synapses)
    {
        j["cut_synapses"].push_back(
                {{"pre", s.pre}, {"post", s.post}, {"spikes", s.spikes}});
    }
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error(
                "cannot write cluster set file " + path.string());
    }
    out << j.dump(2) << '\n';
}

} // namespace xbarmap

#include "xbarmap/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "xbarmap/rng.hpp"

namespace xbarmap {

namespace {

std::uint64_t pair_key(std::uint32_t pre, std::uint32_t post)
{
    return (static_cast<std::uint64_t>(pre) << 32) | post;
}

std::string synapse_name(const Synapse &s)
{
    return "synapse (" + std::to_string(s.pre) + " -> " +
            std::to_string(s.post) + ")";
}

std::uint64_t draw_spikes(
        std::mt19937_64 &rng, std::uint64_t lo, std::uint64_t hi)
{
    if (lo == hi)
    {
        return lo;
    }
    const double u = uniform_unit(rng);
    const double log_lo = std::log(static_cast<double>(lo));
    const double log_hi = std::log(static_cast<double>(hi) + 1.0);
    const auto s = static_cast<std::uint64_t>(
            std::floor(std::exp(log_lo + u * (log_hi - log_lo))));
    return std::clamp(s, lo, hi);
}

// Select round(density * pairs.size()) entries via a seeded partial
// Fisher-Yates, then restore (pre, post) order for a canonical listing.
std::vector<std::pair<std::uint32_t, std::uint32_t>> sample_pairs(
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs,
        double density, std::mt19937_64 &rng)
{
    const auto want = static_cast<std::size_t>(
            std::llround(density * static_cast<double>(pairs.size())));
    if (want < pairs.size())
    {
        for (std::size_t t = 0; t < want; ++t)
        {
            const std::size_t j =
                    t + uniform_below(rng, pairs.size() - t);
            std::swap(pairs[t], pairs[j]);
        }
        pairs.resize(want);
        std::sort(pairs.begin(), pairs.end());
    }
    return pairs;
}

} // namespace

void SnnNetwork::validate() const
{
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(synapses.size());
    for (const Synapse &s : synapses)
    {
        if (s.pre >= neuron_count || s.post >= neuron_count)
        {
            throw std::invalid_argument(synapse_name(s) +
                    " references a neuron outside the " +
                    std::to_string(neuron_count) + "-neuron network");
        }
        if (s.pre == s.post)
        {
            throw std::invalid_argument(
                    "self-loop " + synapse_name(s) + " is not allowed");
        }
        if (!seen.insert(pair_key(s.pre, s.post)).second)
        {
            throw std::invalid_argument("duplicate " + synapse_name(s));
        }
    }
}

std::uint64_t total_spikes(const SnnNetwork &net)
{
    std::uint64_t sum = 0;
    for (const Synapse &s : net.synapses)
    {
        sum += s.spikes;
    }
    return sum;
}

SnnNetwork load_workload(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open workload file " + path.string());
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

    SnnNetwork net;
    try
    {
        net.neuron_count = j.at("neurons").get<std::size_t>();
        for (const auto &js : j.at("synapses"))
        {
            Synapse s;
            s.pre = js.at("pre").get<std::uint32_t>();
            s.post = js.at("post").get<std::uint32_t>();
            s.weight = js.at("weight").get<double>();
            s.spikes = js.at("spikes").get<std::uint64_t>();
            net.synapses.push_back(s);
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw std::runtime_error(
                "malformed workload " + path.string() + ": " + e.what());
    }
    net.validate();
    return net;
}

void save_workload(const SnnNetwork &net, const std::filesystem::path &path)
{
    net.validate();
    nlohmann::json j;
    j["neurons"] = net.neuron_count;
    j["synapses"] = nlohmann::json::array();
    for (const Synapse &s : net.synapses)
    {
        j["synapses"].push_back({{"pre", s.pre}, {"post", s.post},
                {"weight", s.weight}, {"spikes", s.spikes}});
    }
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error("cannot write workload file " + path.string());
    }
    out << j.dump(2) << '\n';
}

void TopologySpec::validate() const
{
    if (layer_sizes.empty())
    {
        throw std::invalid_argument("topology needs at least one layer size");
    }
    for (std::size_t n : layer_sizes)
    {
        if (n < 1)
        {
            throw std::invalid_argument("layer sizes must be >= 1");
        }
    }
    if (kind != TopologyKind::recurrent_reservoir && layer_sizes.size() < 2)
    {
        throw std::invalid_argument(
                "layered topologies need at least two layers");
    }
    if (!(density > 0.0 && density <= 1.0))
    {
        throw std::invalid_argument("density must be in (0, 1]");
    }
    if (spikes_min < 1 || spikes_min > spikes_max)
    {
        throw std::invalid_argument(
                "spike range must satisfy 1 <= spikes_min <= spikes_max");
    }
}

SnnNetwork generate_synthetic(const TopologySpec &spec)
{
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    SnnNetwork net;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    if (spec.kind == TopologyKind::recurrent_reservoir)
    {
        const std::size_t n = spec.layer_sizes[0];
        net.neuron_count = n;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        pairs.reserve(n * (n - 1));
        for (std::uint32_t i = 0; i < n; ++i)
        {
            for (std::uint32_t j = 0; j < n; ++j)
            {
                if (i != j)
                {
                    pairs.emplace_back(i, j);
                }
            }
        }
        edges = sample_pairs(std::move(pairs), spec.density, rng);
    }
    else
    {
        std::vector<std::uint32_t> offset(spec.layer_sizes.size(), 0);
        for (std::size_t l = 1; l < spec.layer_sizes.size(); ++l)
        {
            offset[l] = offset[l - 1] +
                    static_cast<std::uint32_t>(spec.layer_sizes[l - 1]);
        }
        net.neuron_count = offset.back() + spec.layer_sizes.back();

        for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l)
        {
            const std::size_t n_in = spec.layer_sizes[l];
            const std::size_t n_out = spec.layer_sizes[l + 1];
            if (spec.kind == TopologyKind::feedforward)
            {
                std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
                pairs.reserve(n_in * n_out);
                for (std::uint32_t i = 0; i < n_in; ++i)
                {
                    for (std::uint32_t j = 0; j < n_out; ++j)
                    {
                        pairs.emplace_back(offset[l] + i, offset[l + 1] + j);
                    }
                }
                auto picked = sample_pairs(std::move(pairs), spec.density, rng);
                edges.insert(edges.end(), picked.begin(), picked.end());
            }
            else
            {
                // Convolutional-like: unrolled to feedforward with a local
                // fan-in window of round(density * n_in) inputs per output
                // neuron, anchored at its proportional position.
                const auto window = static_cast<std::size_t>(std::max<long long>(
                        1, std::llround(spec.density * static_cast<double>(n_in))));
                for (std::uint32_t j = 0; j < n_out; ++j)
                {
                    std::size_t start = 0;
                    if (n_out > 1)
                    {
                        start = static_cast<std::size_t>(std::llround(
                                static_cast<double>(j) *
                                static_cast<double>(n_in - window) /
                                static_cast<double>(n_out - 1)));
                    }
                    else
                    {
                        start = (n_in - window) / 2;
                    }
                    for (std::size_t i = start; i < start + window; ++i)
                    {
                        edges.emplace_back(
                                offset[l] + static_cast<std::uint32_t>(i),
                                offset[l + 1] + j);
                    }
                }
            }
        }
    }

    net.synapses.reserve(edges.size());
    for (const auto &[pre, post] : edges)
    {
        Synapse s;
        s.pre = pre;
        s.post = post;
        s.weight = uniform_unit(rng);
        s.spikes = draw_spikes(rng, spec.spikes_min, spec.spikes_max);
        net.synapses.push_back(s);
    }
    net.validate();
    return net;
}

TopologyKind topology_kind_from_string(const std::string &name)
{
    if (name == "feedforward" || name == "ff")
    {
        return TopologyKind::feedforward;
    }
    if (name == "recurrent-reservoir" || name == "reservoir")
    {
        return TopologyKind::recurrent_reservoir;
    }
    if (name == "convolutional-like" || name == "convolutional" ||
            name == "conv")
    {
        return TopologyKind::convolutional;
    }
    throw std::invalid_argument("unknown topology kind '" + name + "'");
}

std::string to_string(TopologyKind kind)
{
    switch (kind)
    {
    case TopologyKind::feedforward:
        return "feedforward";
    case TopologyKind::recurrent_reservoir:
        return "recurrent-reservoir";
    case TopologyKind::convolutional:
        return "convolutional-like";
    }
    return "?";
}

} // namespace xbarmap

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xbarmap/explorer.hpp"

namespace {

xbarmap::TopologySpec parse_topology(const std::string &arg, double density,
        std::uint64_t seed, std::uint64_t spikes_min, std::uint64_t spikes_max)
{
    const auto colon = arg.find(':');
    if (colon == std::string::npos)
    {
        throw std::invalid_argument(
                "expected --topology <kind:sizes>, e.g. feedforward:16,8,4");
    }
    xbarmap::TopologySpec spec;
    spec.kind = xbarmap::topology_kind_from_string(arg.substr(0, colon));
    std::stringstream ss(arg.substr(colon + 1));
    std::string part;
    while (std::getline(ss, part, ','))
    {
        spec.layer_sizes.push_back(std::stoull(part));
    }
    spec.density = density;
    spec.seed = seed;
    spec.spikes_min = spikes_min;
    spec.spikes_max = spikes_max;
    spec.validate();
    return spec;
}

template <typename T>
std::vector<T> parse_list(
        const std::string &csv, T (*from_string)(const std::string &))
{
    std::vector<T> out;
    std::stringstream ss(csv);
    std::string part;
    while (std::getline(ss, part, ','))
    {
        out.push_back(from_string(part));
    }
    if (out.empty())
    {
        throw std::invalid_argument("empty list '" + csv + "'");
    }
    return out;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"PCM crossbar mapping explorer: maps SNN workloads onto "
                 "tiled crossbar hardware and reports the "
                 "performance-lifetime trade-off"};
    app.require_subcommand(1);

    // gen
    auto *gen = app.add_subcommand(
            "gen", "Generate a synthetic SNN workload file");
    std::string gen_topology;
    double gen_density = 1.0;
    std::uint64_t gen_seed = 0;
    std::uint64_t gen_spikes_min = 1;
    std::uint64_t gen_spikes_max = 1000;
    std::string gen_out;
    gen->add_option("--topology", gen_topology,
               "kind:sizes, e.g. feedforward:16,8,4 or reservoir:100")
            ->required();
    gen->add_option("--density", gen_density, "connection density in (0,1]");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--spikes-min", gen_spikes_min,
            "lower bound of the log-uniform activation counts");
    gen->add_option("--spikes-max", gen_spikes_max,
            "upper bound of the log-uniform activation counts");
    gen->add_option("--out", gen_out, "output workload JSON")->required();

    // currentmap
    auto *cmap = app.add_subcommand(
            "currentmap", "Export the crossbar programming-current map");
    std::string cmap_hw;
    std::string cmap_out;
    cmap->add_option("--hw", cmap_hw, "hardware model JSON");
    cmap->add_option("--out", cmap_out, "output CSV path")->required();

    // explore
    auto *explore = app.add_subcommand("explore",
            "Partition a workload, run the PSO per fitness/policy and "
            "write the archive and reports");
    std::string ex_workload;
    std::string ex_hw;
    std::string ex_fitness = "spikes,time,lifetime";
    std::string ex_policy = "row_major,performance_first,lifetime_first";
    std::uint64_t ex_particles = 0;
    std::uint64_t ex_epochs = 0;
    std::uint64_t ex_iters = 0;
    std::int64_t ex_seed = -1;
    std::string ex_out;
    explore->add_option("--workload", ex_workload, "workload JSON")
            ->required();
    explore->add_option("--hw", ex_hw, "hardware model JSON (also carries "
                                       "the optional pso config block)");
    explore->add_option("--fitness", ex_fitness,
            "comma list of spikes,time,lifetime");
    explore->add_option("--policy", ex_policy,
            "comma list of row_major,performance_first,lifetime_first");
    explore->add_option("--particles", ex_particles, "swarm size");
    explore->add_option("--epochs", ex_epochs, "regroup count");
    explore->add_option("--iters", ex_iters, "iterations per epoch");
    explore->add_option("--seed", ex_seed, "run seed");
    explore->add_option("--out", ex_out, "output directory")->required();

    // report
    auto *report = app.add_subcommand(
            "report", "Regenerate pareto.csv and summary.json from an archive");
    std::string rep_archive;
    std::string rep_out;
    std::string rep_hw;
    report->add_option("--archive", rep_archive, "archive.csv path")
            ->required();
    report->add_option("--out", rep_out, "output directory")->required();
    report->add_option(
            "--hw", rep_hw, "hardware model JSON; adds currentmap.csv");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (gen->parsed())
        {
            const xbarmap::TopologySpec spec = parse_topology(gen_topology,
                    gen_density, gen_seed, gen_spikes_min, gen_spikes_max);
            const xbarmap::SnnNetwork net = xbarmap::generate_synthetic(spec);
            xbarmap::save_workload(net, gen_out);
            std::cout << "wrote " << gen_out << ": " << net.neuron_count
                      << " neurons, " << net.synapses.size() << " synapses, "
                      << xbarmap::total_spikes(net) << " spikes\n";
        }
        else if (cmap->parsed())
        {
            xbarmap::HardwareModel hw;
            if (!cmap_hw.empty())
            {
                hw = xbarmap::load_hardware_model(cmap_hw);
            }
            std::ofstream out(cmap_out);
            if (!out)
            {
                throw std::runtime_error("cannot write " + cmap_out);
            }
            xbarmap::write_current_map_csv(out, hw.geometry);
            std::cout << "wrote " << cmap_out << " (" << hw.geometry.rows
                      << "x" << hw.geometry.cols << ")\n";
        }
        else if (explore->parsed())
        {
            xbarmap::HardwareModel hw;
            xbarmap::ExploreOptions options;
            if (!ex_hw.empty())
            {
                hw = xbarmap::load_hardware_model(ex_hw);
                options.pso = xbarmap::load_pso_config(ex_hw);
            }
            options.fitness_kinds = parse_list<xbarmap::FitnessKind>(
                    ex_fitness, xbarmap::fitness_kind_from_string);
            options.policies = parse_list<xbarmap::PlacementPolicy>(
                    ex_policy, xbarmap::placement_policy_from_string);
            if (ex_particles > 0)
            {
                options.pso.n_particles = ex_particles;
            }
            if (ex_epochs > 0)
            {
                options.pso.epochs = ex_epochs;
            }
            if (ex_iters > 0)
            {
                options.pso.iterations_per_epoch = ex_iters;
            }
            if (ex_seed >= 0)
            {
                options.pso.seed = static_cast<std::uint64_t>(ex_seed);
            }

            const xbarmap::SnnNetwork net =
                    xbarmap::load_workload(ex_workload);
            const xbarmap::SolutionArchive archive =
                    xbarmap::explore(net, hw, options);
            xbarmap::report(archive, ex_out, &hw);
            const xbarmap::ParetoFront front = xbarmap::pareto_front(archive);
            std::cout << "explored " << archive.size() << " candidates, "
                      << front.entries.size() << " on the Pareto front; "
                      << "reports in " << ex_out << '\n';
        }
        else if (report->parsed())
        {
            const xbarmap::SolutionArchive archive =
                    xbarmap::load_archive_csv(rep_archive);
            if (!rep_hw.empty())
            {
                const xbarmap::HardwareModel hw =
                        xbarmap::load_hardware_model(rep_hw);
                xbarmap::report(archive, rep_out, &hw);
            }
            else
            {
                xbarmap::report(archive, rep_out);
            }
            std::cout << "reports in " << rep_out << '\n';
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#include "xbarmap/explorer.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace xbarmap {

namespace {

std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_assignment(const std::vector<std::size_t> &assignment)
{
    std::string s;
    for (std::size_t i = 0; i < assignment.size(); ++i)
    {
        if (i > 0)
        {
            s += '|';
        }
        s += std::to_string(assignment[i]);
    }
    return s;
}

std::vector<std::size_t> parse_assignment(const std::string &field)
{
    std::vector<std::size_t> assignment;
    std::stringstream ss(field);
    std::string part;
    while (std::getline(ss, part, '|'))
    {
        assignment.push_back(std::stoull(part));
    }
    return assignment;
}

std::string timestamp_utc()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(
            std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

constexpr const char *kArchiveHeader =
        "mapping_id,fitness_kind,policy,iteration,seed,assignment,"
        "exec_time_s,min_lifetime,energy_j,interconnect_spikes";

void write_entry_row(std::ostream &out, const ArchiveEntry &e)
{
    out << e.mapping_id << ',' << to_string(e.fitness_kind) << ','
        << to_string(e.policy) << ',' << e.iteration << ',' << e.seed << ','
        << fmt_assignment(e.assignment) << ','
        << fmt_double(e.metrics.execution_time_s) << ','
        << fmt_double(e.metrics.min_effective_lifetime) << ','
        << fmt_double(e.metrics.energy_j) << ','
        << e.metrics.interconnect_spikes << '\n';
}

// Best archive entry for one fitness kind by its own objective; ties keep
// the lowest mapping_id.
const ArchiveEntry *best_for(const SolutionArchive &archive, FitnessKind kind)
{
    const ArchiveEntry *best = nullptr;
    for (const ArchiveEntry &e : archive.entries())
    {
        if (e.fitness_kind != kind)
        {
            continue;
        }
        if (best == nullptr ||
                fitness_of(e.metrics, kind) < fitness_of(best->metrics, kind))
        {
            best = &e;
        }
    }
    return best;
}

} // namespace

SolutionArchive explore(const SnnNetwork &net, const HardwareModel &hw,
        const ExploreOptions &options)
{
    hw.validate();
    options.pso.validate();
    if (options.fitness_kinds.empty() || options.policies.empty())
    {
        throw std::invalid_argument(
                "explore needs at least one fitness kind and one policy");
    }

    const ClusterSet cs = partition(
            net, hw.geometry.rows, hw.geometry.cols, options.pso.seed);

    SolutionArchive archive;
    for (FitnessKind kind : options.fitness_kinds)
    {
        for (PlacementPolicy policy : options.policies)
        {
            try
            {
                PsoRunResult run = run_pso(cs, hw, options.pso, kind, policy);
                archive.merge(std::move(run.archive));
            }
            catch (const std::exception &e)
            {
                throw std::runtime_error("explore failed in run (fitness=" +
                        to_string(kind) + ", policy=" + to_string(policy) +
                        "): " + e.what());
            }
        }
    }
    return archive;
}

ParetoFront pareto_front(const SolutionArchive &archive)
{
    if (archive.empty())
    {
        throw std::invalid_argument(
                "cannot extract a Pareto front from an empty archive");
    }
    std::vector<const ArchiveEntry *> sorted;
    sorted.reserve(archive.size());
    for (const ArchiveEntry &e : archive.entries())
    {
        sorted.push_back(&e);
    }
    std::sort(sorted.begin(), sorted.end(),
            [](const ArchiveEntry *a, const ArchiveEntry *b) {
                if (a->metrics.execution_time_s != b->metrics.execution_time_s)
                {
                    return a->metrics.execution_time_s <
                            b->metrics.execution_time_s;
                }
                if (a->metrics.min_effective_lifetime !=
                        b->metrics.min_effective_lifetime)
                {
                    return a->metrics.min_effective_lifetime >
                            b->metrics.min_effective_lifetime;
                }
                return a->mapping_id < b->mapping_id;
            });

    ParetoFront front;
    double best_lifetime = -1.0;
    for (const ArchiveEntry *e : sorted)
    {
        if (e->metrics.min_effective_lifetime > best_lifetime)
        {
            front.entries.push_back(*e);
            best_lifetime = e->metrics.min_effective_lifetime;
        }
    }
    return front;
}

void write_archive_csv(
        const SolutionArchive &archive, const std::filesystem::path &path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "# xbarmap archive " << timestamp_utc() << '\n';
    out << kArchiveHeader << '\n';
    for (const ArchiveEntry &e : archive.entries())
    {
        write_entry_row(out, e);
    }
    if (!out)
    {
        throw std::runtime_error("write failed for " + path.string());
    }
}

SolutionArchive load_archive_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open archive " + path.string());
    }
    SolutionArchive archive;
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        if (!header_seen)
        {
            if (line != kArchiveHeader)
            {
                throw std::runtime_error(path.string() +
                        ": unexpected archive header at line " +
                        std::to_string(lineno));
            }
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ','))
        {
            fields.push_back(field);
        }
        if (fields.size() != 10)
        {
            throw std::runtime_error(path.string() + ": malformed row at line " +
                    std::to_string(lineno));
        }
        try
        {
            ArchiveEntry e;
            e.fitness_kind = fitness_kind_from_string(fields[1]);
            e.policy = placement_policy_from_string(fields[2]);
            e.iteration = std::stoull(fields[3]);
            e.seed = std::stoull(fields[4]);
            e.assignment = parse_assignment(fields[5]);
            e.metrics.execution_time_s = std::stod(fields[6]);
            e.metrics.min_effective_lifetime = std::stod(fields[7]);
            e.metrics.energy_j = std::stod(fields[8]);
            e.metrics.interconnect_spikes = std::stoull(fields[9]);
            archive.append(std::move(e));
        }
        catch (const std::exception &ex)
        {
            throw std::runtime_error(path.string() + ": bad value at line " +
                    std::to_string(lineno) + ": " + ex.what());
        }
    }
    if (!header_seen)
    {
        throw std::runtime_error(path.string() + ": no archive header found");
    }
    return archive;
}

PsoConfig load_pso_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open config file " + path.string());
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
    PsoConfig cfg;
    if (!j.contains("pso"))
    {
        return cfg;
    }
    const nlohmann::json &p = j["pso"];
    cfg.n_particles = p.value("particles", cfg.n_particles);
    cfg.sub_swarms = p.value("sub_swarms", cfg.sub_swarms);
    cfg.phi1 = p.value("phi1", cfg.phi1);
    cfg.phi2 = p.value("phi2", cfg.phi2);
    cfg.epochs = p.value("epochs", cfg.epochs);
    cfg.iterations_per_epoch =
            p.value("iterations_per_epoch", cfg.iterations_per_epoch);
    cfg.velocity_clamp = p.value("velocity_clamp", cfg.velocity_clamp);
    cfg.convergence_epsilon =
            p.value("convergence_epsilon", cfg.convergence_epsilon);
    cfg.convergence_window =
            p.value("convergence_window", cfg.convergence_window);
    cfg.seed = p.value("seed", cfg.seed);
    return cfg;
}

void report(const SolutionArchive &archive,
        const std::filesystem::path &out_dir, const HardwareModel *hw)
{
    if (archive.empty())
    {
        throw std::invalid_argument("cannot report an empty archive");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
    {
        throw std::runtime_error(
                "cannot create output directory " + out_dir.string());
    }

    write_archive_csv(archive, out_dir / "archive.csv");

    const ParetoFront front = pareto_front(archive);
    {
        const auto path = out_dir / "pareto.csv";
        std::ofstream out(path);
        if (!out)
        {
            throw std::runtime_error("cannot write " + path.string());
        }
        out << "# xbarmap pareto front " << timestamp_utc() << '\n';
        out << kArchiveHeader << '\n';
        for (const ArchiveEntry &e : front.entries)
        {
            write_entry_row(out, e);
        }
    }

    // Reference points: the fastest entry and the highest-lifetime entry
    // over the whole archive (ties: lowest mapping_id).
    const ArchiveEntry *fastest = nullptr;
    const ArchiveEntry *longest = nullptr;
    for (const ArchiveEntry &e : archive.entries())
    {
        if (fastest == nullptr ||
                e.metrics.execution_time_s < fastest->metrics.execution_time_s)
        {
            fastest = &e;
        }
        if (longest == nullptr ||
                e.metrics.min_effective_lifetime >
                        longest->metrics.min_effective_lifetime)
        {
            longest = &e;
        }
    }

    nlohmann::json summary;
    summary["entries"] = archive.size();
    summary["pareto_size"] = front.entries.size();
    summary["min_exec_time_mapping_id"] = fastest->mapping_id;
    summary["max_lifetime_mapping_id"] = longest->mapping_id;
    summary["best_per_fitness"] = nlohmann::json::object();
    for (FitnessKind kind : {FitnessKind::spikes, FitnessKind::time,
                 FitnessKind::lifetime})
    {
        const ArchiveEntry *best = best_for(archive, kind);
        if (best == nullptr)
        {
            continue;
        }
        nlohmann::json jb;
        jb["mapping_id"] = best->mapping_id;
        jb["policy"] = to_string(best->policy);
        jb["exec_time_s"] = best->metrics.execution_time_s;
        jb["min_lifetime"] = best->metrics.min_effective_lifetime;
        jb["energy_j"] = best->metrics.energy_j;
        jb["interconnect_spikes"] = best->metrics.interconnect_spikes;
        jb["normalized_exec_time"] = best->metrics.execution_time_s /
                fastest->metrics.execution_time_s;
        jb["normalized_lifetime"] = best->metrics.min_effective_lifetime /
                longest->metrics.min_effective_lifetime;
        summary["best_per_fitness"][to_string(kind)] = jb;
    }
    {
        const auto path = out_dir / "summary.json";
        std::ofstream out(path);
        if (!out)
        {
            throw std::runtime_error("cannot write " + path.string());
        }
        out << summary.dump(2) << '\n';
    }

    if (hw != nullptr)
    {
        const auto path = out_dir / "currentmap.csv";
        std::ofstream out(path);
        if (!out)
        {
            throw std::runtime_error("cannot write " + path.string());
        }
        write_current_map_csv(out, hw->geometry);
    }
}

} // namespace xbarmap

#pragma once

#include <filesystem>
#include <vector>

#include "xbarmap/archive.hpp"
#include "xbarmap/mapper.hpp"
#include "xbarmap/workload.hpp"

namespace xbarmap {

struct ExploreOptions {
    std::vector<FitnessKind> fitness_kinds = {
            FitnessKind::spikes, FitnessKind::time, FitnessKind::lifetime};
    std::vector<PlacementPolicy> policies = {PlacementPolicy::row_major,
            PlacementPolicy::performance_first, PlacementPolicy::lifetime_first};
    PsoConfig pso;
};

// Full pipeline: partition once, then one PSO run per (fitness, policy)
// combination with the same seed, all candidates merged into one archive.
SolutionArchive explore(const SnnNetwork &net, const HardwareModel &hw,
        const ExploreOptions &options);

// Entries non-dominated in (execution_time down, min_effective_lifetime
// up), sorted by execution time. Exact duplicates keep the lowest
// mapping_id.
struct ParetoFront {
    std::vector<ArchiveEntry> entries;
};

ParetoFront pareto_front(const SolutionArchive &archive);

// Writes archive.csv, pareto.csv and summary.json into out_dir;
// currentmap.csv too when a hardware model is supplied. Lifetimes in the
// summary are normalized to the highest-lifetime entry, execution times to
// the fastest entry.
void report(const SolutionArchive &archive,
        const std::filesystem::path &out_dir,
        const HardwareModel *hw = nullptr);

void write_archive_csv(
        const SolutionArchive &archive, const std::filesystem::path &path);
SolutionArchive load_archive_csv(const std::filesystem::path &path);

// Reads the optional "pso" block of the main JSON configuration; fields
// not present keep their defaults.
PsoConfig load_pso_config(const std::filesystem::path &path);

} // namespace xbarmap

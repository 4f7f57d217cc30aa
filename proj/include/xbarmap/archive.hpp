#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xbarmap/metrics.hpp"
#include "xbarmap/placement.hpp"

namespace xbarmap {

// Objective minimized by the swarm. `lifetime` is maximized, so its raw
// fitness value is the reciprocal of the minimum effective lifetime.
enum class FitnessKind { spikes, time, lifetime };

FitnessKind fitness_kind_from_string(const std::string &name);
std::string to_string(FitnessKind kind);

double fitness_of(const MappingMetrics &metrics, FitnessKind kind);

// One evaluated candidate. The assignment vector plus policy fully
// describe the mapping; placements are recomputed deterministically.
struct ArchiveEntry {
    std::uint64_t mapping_id = 0;
    FitnessKind fitness_kind = FitnessKind::spikes;
    PlacementPolicy policy = PlacementPolicy::row_major;
    std::size_t iteration = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> assignment;
    MappingMetrics metrics;
};

// Append-only log of every candidate evaluated during exploration.
class SolutionArchive {
public:
    void append(ArchiveEntry entry)
    {
        entry.mapping_id = entries_.size();
        entries_.push_back(std::move(entry));
    }

    void merge(SolutionArchive &&other)
    {
        for (ArchiveEntry &e : other.entries_)
        {
            append(std::move(e));
        }
        other.entries_.clear();
    }

    const std::vector<ArchiveEntry> &entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<ArchiveEntry> entries_;
};

} // namespace xbarmap

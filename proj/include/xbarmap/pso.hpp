#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace xbarmap {

struct PsoConfig {
    std::size_t n_particles = 30;
    std::size_t sub_swarms = 3;
    double phi1 = 0.4;
    double phi2 = 0.4;
    std::size_t epochs = 10;
    std::size_t iterations_per_epoch = 50;
    // <= 0 means "decide from the search span" (tiles / 2 in run_pso)
    double velocity_clamp = 0.0;
    // a sub-swarm counts as converged when its best improves by less than
    // this over convergence_window iterations; 0 disables the early exit
    double convergence_epsilon = 1e-9;
    std::size_t convergence_window = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    double best_fitness = 0.0;
};

struct SwarmState {
    std::vector<Particle> particles;
    std::vector<std::size_t> sub_swarm_of;
    std::vector<std::vector<double>> local_best_position;
    std::vector<double> local_best_fitness;
    std::vector<double> global_best_position;
    double global_best_fitness = 0.0;
    std::size_t iteration = 0;
    std::size_t dims = 0;
    std::size_t discarded = 0; // candidates dropped for non-finite fitness
};

using FitnessFn = std::function<double(std::span<const double>)>;

// Continuous-to-discrete bridge: component d becomes
// floor(clamp(position[d], 0, tiles - epsilon)). Total and deterministic;
// non-finite components clamp like infinities of their sign.
std::vector<std::size_t> decode(
        std::span<const double> position, std::size_t tiles);

// Uniform positions in [0, position_span) per dimension, zero velocities,
// seeded sub-swarm deal, and one fitness evaluation per particle.
SwarmState init_swarm(const PsoConfig &config, std::size_t dims,
        double position_span, std::mt19937_64 &rng, const FitnessFn &fitness);

// One synchronous update of every particle:
//   v <- v + phi1 (p_best - x) + phi2 (l_best - x), clamped per component
//   x <- x + v
// followed by evaluation and strict-improvement best updates. l_best is
// the particle's sub-swarm best.
void pso_step(SwarmState &state, const PsoConfig &config,
        const FitnessFn &fitness);

// Reshuffles sub-swarm membership: a Fisher-Yates permutation of particle
// indices drawn from `rng`, dealt into contiguous blocks (the first
// n_particles mod sub_swarms blocks are one larger). Personal and global
// bests are preserved; local bests are recomputed from the new members.
void regroup(SwarmState &state, const PsoConfig &config, std::mt19937_64 &rng);

} // namespace xbarmap

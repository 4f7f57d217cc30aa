#include "xbarmap/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "xbarmap/rng.hpp"

namespace xbarmap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void deal_sub_swarms(SwarmState &state, const PsoConfig &config,
        std::mt19937_64 &rng)
{
    const std::size_t n = state.particles.size();
    const std::size_t k = config.sub_swarms;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        order[i] = i;
    }
    shuffle_vector(order, rng);

    state.sub_swarm_of.assign(n, 0);
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    std::size_t at = 0;
    for (std::size_t s = 0; s < k; ++s)
    {
        const std::size_t sz = base + (s < extra ? 1 : 0);
        for (std::size_t i = 0; i < sz; ++i)
        {
            state.sub_swarm_of[order[at++]] = s;
        }
    }
}

void rebuild_local_bests(SwarmState &state, const PsoConfig &config)
{
    state.local_best_position.assign(config.sub_swarms,
            std::vector<double>(state.dims, 0.0));
    state.local_best_fitness.assign(config.sub_swarms, kInf);
    for (std::size_t i = 0; i < state.particles.size(); ++i)
    {
        const Particle &p = state.particles[i];
        const std::size_t s = state.sub_swarm_of[i];
        if (p.best_fitness < state.local_best_fitness[s])
        {
            state.local_best_fitness[s] = p.best_fitness;
            state.local_best_position[s] = p.best_position;
        }
    }
}

void record_best(SwarmState &state, std::size_t particle, double fitness)
{
    Particle &p = state.particles[particle];
    const std::size_t s = state.sub_swarm_of[particle];
    if (fitness < p.best_fitness)
    {
        p.best_fitness = fitness;
        p.best_position = p.position;
    }
    if (fitness < state.local_best_fitness[s])
    {
        state.local_best_fitness[s] = fitness;
        state.local_best_position[s] = p.position;
    }
    if (fitness < state.global_best_fitness)
    {
        state.global_best_fitness = fitness;
        state.global_best_position = p.position;
    }
}

} // namespace

void PsoConfig::validate() const
{
    if (n_particles < 1)
    {
        throw std::invalid_argument("n_particles must be >= 1");
    }
    if (sub_swarms < 1 || sub_swarms > n_particles)
    {
        throw std::invalid_argument(
                "sub_swarms must be in [1, n_particles]");
    }
    if (phi1 < 0.0 || phi2 < 0.0)
    {
        throw std::invalid_argument("phi1 and phi2 must be >= 0");
    }
    if (epochs < 1 || iterations_per_epoch < 1)
    {
        throw std::invalid_argument(
                "epochs and iterations_per_epoch must be >= 1");
    }
}

std::vector<std::size_t> decode(
        std::span<const double> position, std::size_t tiles)
{
    std::vector<std::size_t> assignment(position.size());
    for (std::size_t d = 0; d < position.size(); ++d)
    {
        const double x = position[d];
        if (std::isnan(x) || x < 0.0)
        {
            assignment[d] = 0;
        }
        else
        {
            const double f = std::floor(x);
            assignment[d] = f >= static_cast<double>(tiles)
                    ? tiles - 1
                    : static_cast<std::size_t>(f);
        }
    }
    return assignment;
}

SwarmState init_swarm(const PsoConfig &config, std::size_t dims,
        double position_span, std::mt19937_64 &rng, const FitnessFn &fitness)
{
    config.validate();
    if (dims < 1)
    {
        throw std::invalid_argument("search space needs dims >= 1");
    }

    SwarmState state;
    state.dims = dims;
    state.particles.resize(config.n_particles);
    for (Particle &p : state.particles)
    {
        p.position.resize(dims);
        for (double &x : p.position)
        {
            x = uniform_unit(rng) * position_span;
        }
        p.velocity.assign(dims, 0.0);
        p.best_position = p.position;
        p.best_fitness = kInf;
    }
    deal_sub_swarms(state, config, rng);
    rebuild_local_bests(state, config);
    state.global_best_position.assign(dims, 0.0);
    state.global_best_fitness = kInf;

    for (std::size_t i = 0; i < state.particles.size(); ++i)
    {
        const double f = fitness(state.particles[i].position);
        if (!std::isfinite(f))
        {
            ++state.discarded;
            continue;
        }
        state.particles[i].best_fitness = f;
        state.particles[i].best_position = state.particles[i].position;
        record_best(state, i, f);
    }
    return state;
}

void pso_step(SwarmState &state, const PsoConfig &config,
        const FitnessFn &fitness)
{
    const double clamp = config.velocity_clamp;
    for (std::size_t i = 0; i < state.particles.size(); ++i)
    {
        Particle &p = state.particles[i];
        const std::vector<double> &lbest =
                state.local_best_position[state.sub_swarm_of[i]];
        for (std::size_t d = 0; d < state.dims; ++d)
        {
            double v = p.velocity[d] +
                    config.phi1 * (p.best_position[d] - p.position[d]) +
                    config.phi2 * (lbest[d] - p.position[d]);
            if (clamp > 0.0)
            {
                v = std::clamp(v, -clamp, clamp);
            }
            p.velocity[d] = v;
            p.position[d] += v;
        }
        const double f = fitness(p.position);
        if (!std::isfinite(f))
        {
            ++state.discarded;
            continue;
        }
        record_best(state, i, f);
    }
    ++state.iteration;
}

void regroup(SwarmState &state, const PsoConfig &config, std::mt19937_64 &rng)
{
    deal_sub_swarms(state, config, rng);
    rebuild_local_bests(state, config);
}

} // namespace xbarmap

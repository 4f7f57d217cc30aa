#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace xbarmap {

// Deterministic helpers on top of mt19937_64. The standard distributions
// are not bit-reproducible across library implementations, so draws are
// hand-rolled from the raw engine output.

inline double uniform_unit(std::mt19937_64 &rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t n)
{
    return rng() % n;
}

// Fisher-Yates, high index down.
template <typename T>
void shuffle_vector(std::vector<T> &v, std::mt19937_64 &rng)
{
    for (std::size_t i = v.size(); i > 1; --i)
    {
        std::swap(v[i - 1], v[uniform_below(rng, i)]);
    }
}

} // namespace xbarmap

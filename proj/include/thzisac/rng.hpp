#pragma once

#include <cmath>
#include <cstdint>

#include "thzisac/util.hpp"

namespace thzisac
{
    // Counter-based SplitMix64: output i of stream `seed` is a pure function
    // of (seed, i), so parallel workers can draw from disjoint index ranges
    // without sharing state and results are reproducible regardless of
    // scheduling.
    struct SplitMix64 {
        std::uint64_t seed = 0;

        std::uint64_t next_u64(std::uint64_t index) const
        {
            std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            return z ^ (z >> 31);
        }

        // Uniform in (0, 1): top 53 bits, offset by half an ulp so 0 is
        // excluded (needed for the log in Box-Muller).
        double uniform(std::uint64_t index) const
        {
            return (static_cast<double>(next_u64(index) >> 11) + 0.5) * 0x1.0p-53;
        }

        // Standard normal via Box-Muller; consumes indices 2*index and
        // 2*index + 1 of the underlying stream.
        double normal(std::uint64_t index) const
        {
            const double u1 = uniform(2 * index);
            const double u2 = uniform(2 * index + 1);
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
        }
    };

    // Distinct stream for a (seed, stream-id) pair; mixes the id through one
    // SplitMix64 round so nearby ids give unrelated seeds.
    inline SplitMix64 make_stream(std::uint64_t seed, std::uint64_t stream_id)
    {
        SplitMix64 base{seed};
        return SplitMix64{base.next_u64(0xD1B54A32D192ED03ULL ^ stream_id)};
    }
}

/// @file  rng.hpp
/// @brief Seeded random generation and seed-stream derivation.

#pragma once

#include <cstdint>
#include <random>

namespace ordembed {

/// Every stochastic operation takes an explicit generator so that trials are
/// reproducible and can run in parallel without shared state.
using Rng = std::mt19937_64;

/// Derives an independent stream seed from a master seed (SplitMix64 output
/// function applied to a jumped state). Distinct streams of one master seed
/// never share a generator.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

} // namespace ordembed

#pragma once

#include <cstdint>
#include <span>

namespace wickito {

// Seed of an independent stream: splitmix64 of (master XOR golden-ratio * (stream + 1)).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream);

// Standard normals from the given stream (mt19937_64 + std::normal_distribution).
void fill_normal(std::uint64_t master, std::uint64_t stream, std::span<double> out);

}  // namespace wickito

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace bhd {

/// Derive an independent stream seed from a master seed and a stable label.
/// Stable across platforms and worker counts.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0);

using Rng = std::mt19937_64;

/// n samples of N(0, sigma^2).
std::vector<double> gaussian_samples(std::size_t n, double sigma, std::uint64_t seed);

}  // namespace bhd

// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "topogen/error.hpp"

namespace topogen {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive per-iteration seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// The helpers below avoid the standard distributions so that a seed produces
// the same stream regardless of the standard library in use.

// Uniform in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [lo, hi).
inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform in the open interval (lo, hi).
inline double uniform_open(Rng& rng, double lo, double hi) {
  for (;;) {
    double v = uniform(rng, lo, hi);
    if (v > lo && v < hi) return v;
  }
}

// Uniform integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n <= 1) return 0;
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t v = rng();
    if (v < limit) return static_cast<std::size_t>(v % bound);
  }
}

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_index(rng, i)]);
  }
}

inline bool weights_sum_to_one(std::span<const double> weights, double tol) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || w > 1.0 + tol) return false;
    sum += w;
  }
  return std::abs(sum - 1.0) <= tol;
}

// Draws an index with probability proportional to weights[i].
inline std::size_t sample_index(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  require(total > 0.0, ErrorCode::kInvalidParams, "weights sum to zero");
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  // Rounding left u at the very top; return the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return weights.size() - 1;
}

template <typename T>
const T& sample_categorical(const std::vector<std::pair<T, double>>& table,
                            Rng& rng) {
  std::vector<double> weights;
  weights.reserve(table.size());
  for (const auto& entry : table) weights.push_back(entry.second);
  return table[sample_index(weights, rng)].first;
}

}  // namespace topogen

#pragma once

// Small seeded generators for property tests. Each trial gets its own seed so
// a failure message names the exact case to replay.

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace seqfair::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  double normal(double mean = 0.0, double sd = 1.0) {
    return std::normal_distribution<double>(mean, sd)(rng_);
  }

  // Mix of continuous values and deliberate ties.
  std::vector<double> sample(std::size_t lo, std::size_t hi) {
    const std::size_t n = size(lo, hi);
    const bool ties = size(0, 2) == 0;
    std::vector<double> out(n);
    for (auto& v : out) v = ties ? static_cast<double>(size(0, 5)) : normal(0.0, real(0.1, 10.0));
    return out;
  }

  std::vector<double> distinct_sample(std::size_t lo, std::size_t hi) {
    std::vector<double> out(size(lo, hi));
    for (auto& v : out) v = normal(real(-5.0, 5.0), real(0.1, 3.0));
    return out;
  }

  // Group labels "g0".."g{k-1}", every label present at least once.
  std::vector<std::string> groups(std::size_t n, std::size_t k) {
    std::vector<std::string> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = "g" + std::to_string(i < k ? i : size(0, k - 1));
    }
    std::shuffle(out.begin(), out.end(), rng_);
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

template <class Body>
void for_all(int trials, std::uint64_t base_seed, Body&& body) {
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(t);
    SCOPED_TRACE("trial seed " + std::to_string(seed));
    Gen gen(seed);
    body(gen);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

}  // namespace seqfair::testing

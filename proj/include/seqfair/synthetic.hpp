#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seqfair/dataset.hpp"

namespace seqfair {

// How the binary sensitive attributes are drawn.
//   kShared:      one latent Xt ~ N(0, sigma_x) per row, A_i = +1 iff Xt > tau_i.
//   kIndependent: A_i = 2 * Bernoulli(q_i) - 1 independently, q_i = P(Xt > tau_i).
enum class LatentMode { kShared, kIndependent };

using SplitFractions = std::array<double, 3>;  // train, test, unlabeled

struct SynthConfig {
  std::size_t d = 10;
  std::size_t r = 3;
  double sigma_x = 0.15;  // a variance
  std::vector<double> tau = {0.0, 0.05, 0.1};
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  SplitFractions split = {0.50, 0.25, 0.25};
  LatentMode latent = LatentMode::kShared;

  // Throws InvalidConfig naming the offending field.
  void validate() const;
};

// X ~ N_d(0, sigma_x I), A in {-1, +1}^r, Y ~ N(1'X + 1'A, 1).
struct SyntheticData {
  std::size_t d = 0;
  std::vector<double> features;               // n x d, row-major
  std::vector<std::vector<int>> attributes;   // r columns
  std::vector<double> labels;

  std::size_t size() const noexcept { return labels.size(); }
  double feature(std::size_t row, std::size_t j) const { return features[row * d + j]; }
};

SyntheticData generate_dataset(const SynthConfig& config);

// P(Xt > tau) for Xt ~ N(0, variance).
double exceedance_probability(double tau, double variance);

struct SplitIndices {
  std::vector<std::size_t> train, test, unlabeled;
};

// Seeded shuffle, then consecutive blocks of round(n * f_train) and
// round(n * f_test) rows; the remainder is unlabeled.
SplitIndices split_indices(std::size_t n, const SplitFractions& fractions, std::uint64_t seed);

struct DatasetSplit {
  Dataset train, test, unlabeled;
};

DatasetSplit split_dataset(const Dataset& data, const SplitFractions& fractions,
                           std::uint64_t seed);

SyntheticData take_rows(const SyntheticData& data, std::span<const std::size_t> rows);

// Ordinary least squares with intercept on the columns [X, A].
struct LinearModel {
  double intercept = 0.0;
  std::vector<double> coefficients;  // d feature weights, then r attribute weights

  std::vector<double> predict(const SyntheticData& data) const;
};

LinearModel fit_linear_baseline(const SyntheticData& train);

std::string attribute_name(std::size_t i);  // "A1", "A2", ...

// Scores plus attributes "A1".."Ar" (tokens "-1" / "1") and labels y. The
// source table holds x1..xd, A1..Ar, y, score.
Dataset to_dataset(const SyntheticData& data, std::vector<double> scores);

struct BenchmarkSplit {
  SyntheticData raw;
  Dataset data;
};

// The full harness: generate, split, fit the linear baseline on train and
// score every split with it.
struct Benchmark {
  SynthConfig config;
  LinearModel model;
  BenchmarkSplit train, test, unlabeled;
};

Benchmark make_benchmark(const SynthConfig& config);

}  // namespace seqfair

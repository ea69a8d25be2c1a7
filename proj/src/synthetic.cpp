#include "seqfair/synthetic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "seqfair/errors.hpp"

namespace seqfair {

namespace {

void check_split(const SplitFractions& f) {
  double sum = 0.0;
  for (double x : f) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidConfig("split: fractions must lie in [0, 1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidConfig("split: fractions sum to " + std::to_string(sum) + ", expected 1");
  }
}

}  // namespace

void SynthConfig::validate() const {
  if (d == 0) throw InvalidConfig("d: must be a positive integer");
  if (r == 0) throw InvalidConfig("r: must be a positive integer");
  if (!(sigma_x > 0.0) || !std::isfinite(sigma_x)) throw InvalidConfig("sigma_x: must be positive");
  if (tau.size() != r) {
    throw InvalidConfig("tau: has " + std::to_string(tau.size()) + " entries, r is " +
                        std::to_string(r));
  }
  for (double t : tau) {
    if (!std::isfinite(t)) throw InvalidConfig("tau: entries must be finite");
  }
  if (n == 0) throw InvalidConfig("n: must be a positive integer");
  check_split(split);
}

double exceedance_probability(double tau, double variance) {
  return 0.5 * std::erfc(tau / std::sqrt(2.0 * variance));
}

SyntheticData generate_dataset(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> feature(0.0, std::sqrt(config.sigma_x));
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::bernoulli_distribution> coins;
  for (double t : config.tau) coins.emplace_back(exceedance_probability(t, config.sigma_x));

  SyntheticData out;
  out.d = config.d;
  out.features.resize(config.n * config.d);
  out.attributes.assign(config.r, std::vector<int>(config.n));
  out.labels.resize(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < config.d; ++j) {
      const double x = feature(rng);
      out.features[i * config.d + j] = x;
      mean += x;
    }
    if (config.latent == LatentMode::kShared) {
      const double latent = feature(rng);
      for (std::size_t a = 0; a < config.r; ++a) {
        out.attributes[a][i] = latent > config.tau[a] ? 1 : -1;
      }
    } else {
      for (std::size_t a = 0; a < config.r; ++a) out.attributes[a][i] = coins[a](rng) ? 1 : -1;
    }
    for (std::size_t a = 0; a < config.r; ++a) mean += out.attributes[a][i];
    out.labels[i] = mean + noise(rng);
  }
  return out;
}

SplitIndices split_indices(std::size_t n, const SplitFractions& fractions, std::uint64_t seed) {
  check_split(fractions);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  const auto dn = static_cast<double>(n);
  const auto n_train = std::min<std::size_t>(n, std::llround(dn * fractions[0]));
  const auto n_test = std::min<std::size_t>(n - n_train, std::llround(dn * fractions[1]));
  SplitIndices s;
  s.train.assign(perm.begin(), perm.begin() + n_train);
  s.test.assign(perm.begin() + n_train, perm.begin() + n_train + n_test);
  s.unlabeled.assign(perm.begin() + n_train + n_test, perm.end());
  return s;
}

DatasetSplit split_dataset(const Dataset& data, const SplitFractions& fractions,
                           std::uint64_t seed) {
  const auto idx = split_indices(data.size(), fractions, seed);
  return {take_rows(data, idx.train), take_rows(data, idx.test), take_rows(data, idx.unlabeled)};
}

SyntheticData take_rows(const SyntheticData& data, std::span<const std::size_t> rows) {
  SyntheticData out;
  out.d = data.d;
  out.features.reserve(rows.size() * data.d);
  out.attributes.assign(data.attributes.size(), {});
  for (std::size_t r : rows) {
    for (std::size_t j = 0; j < data.d; ++j) out.features.push_back(data.feature(r, j));
    for (std::size_t a = 0; a < data.attributes.size(); ++a) {
      out.attributes[a].push_back(data.attributes[a].at(r));
    }
    out.labels.push_back(data.labels.at(r));
  }
  return out;
}

namespace {

Eigen::MatrixXd design_matrix(const SyntheticData& data) {
  const std::size_t n = data.size();
  const std::size_t r = data.attributes.size();
  Eigen::MatrixXd m(n, 1 + data.d + r);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, 0) = 1.0;
    for (std::size_t j = 0; j < data.d; ++j) m(i, 1 + j) = data.feature(i, j);
    for (std::size_t a = 0; a < r; ++a) m(i, 1 + data.d + a) = data.attributes[a][i];
  }
  return m;
}

}  // namespace

LinearModel fit_linear_baseline(const SyntheticData& train) {
  if (train.size() == 0) throw EmptySample("linear baseline needs training rows");
  const Eigen::MatrixXd x = design_matrix(train);
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(train.labels.data(),
                                                              static_cast<Eigen::Index>(train.size()));
  const Eigen::VectorXd beta = x.colPivHouseholderQr().solve(y);
  LinearModel model;
  model.intercept = beta(0);
  model.coefficients.assign(beta.data() + 1, beta.data() + beta.size());
  return model;
}

std::vector<double> LinearModel::predict(const SyntheticData& data) const {
  const std::size_t r = data.attributes.size();
  if (coefficients.size() != data.d + r) {
    throw ShapeError("linear model expects " + std::to_string(coefficients.size()) +
                     " inputs, data has " + std::to_string(data.d + r));
  }
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    double s = intercept;
    for (std::size_t j = 0; j < data.d; ++j) s += coefficients[j] * data.feature(i, j);
    for (std::size_t a = 0; a < r; ++a) s += coefficients[data.d + a] * data.attributes[a][i];
    out[i] = s;
  }
  return out;
}

std::string attribute_name(std::size_t i) { return "A" + std::to_string(i + 1); }

Dataset to_dataset(const SyntheticData& data, std::vector<double> scores) {
  if (scores.size() != data.size()) throw ShapeError("one score per synthetic row is required");
  const std::size_t n = data.size();
  Dataset out;
  for (std::size_t a = 0; a < data.attributes.size(); ++a) {
    out.attribute_names.push_back(attribute_name(a));
    std::vector<std::string> tokens(n);
    for (std::size_t i = 0; i < n; ++i) tokens[i] = data.attributes[a][i] > 0 ? "1" : "-1";
    out.attributes.push_back(std::move(tokens));
  }
  out.labels = data.labels;

  for (std::size_t j = 0; j < data.d; ++j) {
    std::vector<std::string> cells(n);
    for (std::size_t i = 0; i < n; ++i) cells[i] = format_real(data.feature(i, j));
    out.source.add_column("x" + std::to_string(j + 1), std::move(cells));
  }
  for (std::size_t a = 0; a < out.attributes.size(); ++a) {
    out.source.add_column(out.attribute_names[a], out.attributes[a]);
  }
  std::vector<std::string> y(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = format_real(data.labels[i]);
    s[i] = format_real(scores[i]);
  }
  out.source.add_column("y", std::move(y));
  out.source.add_column("score", std::move(s));
  out.scores = std::move(scores);
  return out;
}

Benchmark make_benchmark(const SynthConfig& config) {
  const SyntheticData all = generate_dataset(config);
  const auto idx = split_indices(all.size(), config.split, config.seed);
  Benchmark b;
  b.config = config;
  b.train.raw = take_rows(all, idx.train);
  b.test.raw = take_rows(all, idx.test);
  b.unlabeled.raw = take_rows(all, idx.unlabeled);
  b.model = fit_linear_baseline(b.train.raw);
  for (BenchmarkSplit* split : {&b.train, &b.test, &b.unlabeled}) {
    split->data = to_dataset(split->raw, b.model.predict(split->raw));
  }
  return b;
}

}  // namespace seqfair

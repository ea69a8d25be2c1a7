#include "seqfair/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "seqfair/errors.hpp"
#include "seqfair/synthetic.hpp"
#include "support/data.hpp"
#include "support/gen.hpp"

namespace seqfair {
namespace {

using testing::for_all;
using testing::Gen;
using testing::make_dataset;

// Two equal halves with constant scores 0 and 1. The pooled quantile is 0 up
// to level 1/2 and 1 above, so each group is off by 1 on half of (0, 1).
struct TwoConstants {
  std::vector<double> scores;
  std::vector<std::string> groups;
  explicit TwoConstants(std::size_t half) {
    for (std::size_t i = 0; i < half; ++i) {
      scores.push_back(0.0);
      groups.push_back("0");
      scores.push_back(1.0);
      groups.push_back("1");
    }
  }
};

TEST(Unfairness, TwoConstantGroups) {
  const TwoConstants c(500);
  EXPECT_NEAR(unfairness_single(c.scores, c.groups, GridSpec{1000}), 0.5, 2.0 / 1000);
  EXPECT_NEAR(unfairness_single(c.scores, c.groups, GridSpec{7}), 0.5, 2.0 / 7);
}

TEST(Unfairness, IdenticalGroupsNearZero) {
  std::vector<double> s;
  std::vector<std::string> g;
  for (double v : {0.1, 0.5, 0.9, 2.0, 3.0}) {
    for (const char* name : {"a", "b", "c"}) {
      s.push_back(v);
      g.push_back(name);
    }
  }
  EXPECT_LE(unfairness_single(s, g), 2.0 / 1000);
}

TEST(Unfairness, SingleGroupIsExactlyZero) {
  Gen gen(1);
  const auto s = gen.sample(1, 100);
  EXPECT_EQ(unfairness_single(s, std::vector<std::string>(s.size(), "x")), 0.0);
}

TEST(Unfairness, Errors) {
  const std::vector<double> s{1, 2};
  EXPECT_THROW(unfairness_single(s, std::vector<std::string>{"a"}), ShapeError);
  EXPECT_THROW(unfairness_single(s, std::vector<std::string>{"a", "b"}, GridSpec{0}), InvalidConfig);
}

TEST(Unfairness, TotalIsAdditive) {
  const TwoConstants c(200);
  auto data = make_dataset(c.scores, {{"G", c.groups}});
  const std::vector<std::string> once{"G"};
  const std::vector<std::string> twice{"G", "G"};
  const double single = unfairness_single(c.scores, c.groups);
  EXPECT_EQ(unfairness_total(c.scores, data, once).total, single);
  const auto br = unfairness_total(c.scores, data, twice);
  ASSERT_EQ(br.per_attribute.size(), 2u);
  EXPECT_EQ(br.total, 2 * single);
}

TEST(Unfairness, IndependentAttributeAddsLittle) {
  Gen gen(2);
  const TwoConstants c(5000);
  std::vector<std::string> noise(c.scores.size());
  for (auto& v : noise) v = gen.size(0, 1) ? "u" : "v";
  auto data = make_dataset(c.scores, {{"G", c.groups}, {"N", noise}});
  const std::vector<std::string> attrs{"G", "N"};
  const auto br = unfairness_total(c.scores, data, attrs);
  EXPECT_NEAR(br.total, 0.5, 4.0 / std::sqrt(static_cast<double>(c.scores.size())));
  double sum = 0.0;
  for (const auto& [name, v] : br.per_attribute) sum += v;
  EXPECT_NEAR(br.total, sum, 1e-9);
}

// Reference implementation straight from the definition, with a brute-force
// quantile.
double oracle_unfairness(const std::vector<double>& s, const std::vector<std::string>& g,
                         std::size_t T) {
  auto q = [](std::vector<double> v, double level) {
    std::sort(v.begin(), v.end());
    const auto k = static_cast<std::size_t>(std::ceil(level * v.size() - 1e-12));
    return v[std::max<std::size_t>(k, 1) - 1];
  };
  std::map<std::string, std::vector<double>> by;
  for (std::size_t i = 0; i < s.size(); ++i) by[g[i]].push_back(s[i]);
  double worst = 0.0;
  for (const auto& [name, v] : by) {
    double acc = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
      const double u = (t - 0.5) / T;
      acc += std::abs(q(s, u) - q(v, u));
    }
    worst = std::max(worst, acc / T);
  }
  return worst;
}

TEST(UnfairnessProperty, MatchesDefinition) {
  for_all(40, 2000, [](Gen& gen) {
    const auto s = gen.sample(2, 40);
    const auto g = gen.groups(s.size(), gen.size(1, 2));
    const std::size_t T = gen.size(1, 60);
    ASSERT_NEAR(unfairness_single(s, g, GridSpec{T}), oracle_unfairness(s, g, T), 1e-9);
  });
}

TEST(UnfairnessProperty, NonNegativeShiftAndScale) {
  for_all(200, 2100, [](Gen& gen) {
    const auto s = gen.sample(2, 200);
    const auto g = gen.groups(s.size(), gen.size(1, 3));
    const double base = unfairness_single(s, g);
    ASSERT_GE(base, 0.0);

    const double shift = gen.real(-10, 10);
    auto moved = s;
    for (auto& x : moved) x += shift;
    ASSERT_NEAR(unfairness_single(moved, g), base, 1e-9 * (1 + std::abs(shift)));

    const double c = gen.real(0.01, 4);
    auto scaled = s;
    for (auto& x : scaled) x *= c;
    ASSERT_NEAR(unfairness_single(scaled, g), c * base, 1e-9 * (1 + c * base));

    // A negative factor mirrors the quantile function, which swaps left and
    // right limits at grid nodes that hit a jump level exactly.
    for (auto& x : scaled) x = -x;
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    ASSERT_NEAR(unfairness_single(scaled, g), c * base, 2.0 * c * (*hi - *lo) / 1000 + 1e-9);
  });
}

TEST(UnfairnessProperty, GridConvergenceOnSyntheticBenchmark) {
  for (std::uint64_t seed : {0u, 1u}) {
    SynthConfig cfg;
    cfg.seed = seed;
    const auto b = make_benchmark(cfg);
    for (const auto& name : b.test.data.attribute_names) {
      const auto groups = b.test.data.attribute(name);
      for (std::size_t T : {500u, 1000u, 2000u}) {
        const double fine = unfairness_single(b.test.data.scores, groups, GridSpec{T});
        const double coarse = unfairness_single(b.test.data.scores, groups, GridSpec{T / 2});
        EXPECT_LE(std::abs(fine - coarse), 0.01 * fine) << name << " T=" << T;
      }
    }
  }
}

TEST(Risk, Examples) {
  const std::vector<double> y{1, -1};
  EXPECT_EQ(risk_mse(y, y), 0.0);
  EXPECT_EQ(risk_mse(std::vector<double>{0, 0}, y), 1.0);
  EXPECT_EQ(risk_mse(std::vector<double>{2}, std::vector<double>{0}), 4.0);
  EXPECT_THROW(risk_mse(std::vector<double>{1}, y), ShapeError);
  EXPECT_THROW(risk_mse(std::vector<double>{}, std::vector<double>{}), ShapeError);
}

TEST(RiskProperty, PermutationInvariant) {
  for_all(100, 2200, [](Gen& gen) {
    auto p = gen.sample(1, 100);
    std::vector<double> y(p.size());
    for (auto& v : y) v = gen.normal();
    const double base = risk_mse(p, y);
    ASSERT_GE(base, 0.0);
    std::vector<std::size_t> idx(p.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), gen.engine());
    std::vector<double> pp, yy;
    for (auto i : idx) {
      pp.push_back(p[i]);
      yy.push_back(y[i]);
    }
    ASSERT_NEAR(risk_mse(pp, yy), base, 1e-12 * (1 + base));
  });
}

TEST(Classification, Examples) {
  const std::vector<double> labels{0, 1, 1, 0};
  const auto perfect = classification_metrics(std::vector<double>{0.1, 0.9, 0.8, 0.2}, labels);
  EXPECT_EQ(perfect.accuracy, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);

  const auto negative = classification_metrics(std::vector<double>{0.1, 0.2, 0.3, 0.4}, labels);
  EXPECT_EQ(negative.accuracy, 0.5);
  EXPECT_EQ(negative.f1, 0.0);

  const auto zero = classification_metrics(std::vector<double>{0.1, 0.2}, std::vector<double>{1, 1}, 0.0);
  EXPECT_EQ(zero.accuracy, 1.0);
  EXPECT_EQ(zero.f1, 1.0);

  // tp=1 fp=1 fn=1 tn=1: precision = recall = 1/2
  const auto mixed = classification_metrics(std::vector<double>{0.9, 0.9, 0.1, 0.1},
                                            std::vector<double>{1, 0, 1, 0});
  EXPECT_DOUBLE_EQ(mixed.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(mixed.f1, 0.5);

  // Score equal to the threshold counts as negative.
  EXPECT_EQ(classification_metrics(std::vector<double>{0.5}, std::vector<double>{0}).accuracy, 1.0);
}

TEST(Classification, RejectsNonBinaryLabels) {
  EXPECT_THROW(classification_metrics(std::vector<double>{0.2}, std::vector<double>{0.5}), InvalidLabel);
  EXPECT_THROW(classification_metrics(std::vector<double>{0.2}, std::vector<double>{-1}), InvalidLabel);
  EXPECT_THROW(classification_metrics(std::vector<double>{0.2, 0.3}, std::vector<double>{1}), ShapeError);
}

TEST(RelativeImprovement, Examples) {
  const std::map<std::string, double> base{{"a", 0.4}, {"b", 0.2}};
  for (const auto& [k, v] : relative_improvement(base, base)) EXPECT_EQ(v, 1.0) << k;
  const std::map<std::string, double> zeros{{"a", 0.0}, {"b", 0.0}};
  for (const auto& [k, v] : relative_improvement(base, zeros)) EXPECT_EQ(v, 0.0) << k;

  const auto r = relative_improvement({{"U", 0.378}}, {{"U", 0.019}});
  ASSERT_TRUE(r.at("U").has_value());
  EXPECT_NEAR(*r.at("U"), 0.0503, 5e-5);

  const auto na = relative_improvement({{"U", 0.0}}, {{"U", 0.1}});
  EXPECT_FALSE(na.at("U").has_value());
}

TEST(Evaluate, OmitsRiskWithoutLabels) {
  const TwoConstants c(10);
  auto data = make_dataset(c.scores, {{"G", c.groups}});
  const std::vector<std::string> attrs{"G"};
  const auto report = evaluate(c.scores, data, attrs);
  EXPECT_FALSE(report.risk_mse);
  EXPECT_FALSE(report.accuracy);
  ASSERT_EQ(report.unfairness_per_attribute.size(), 1u);
  EXPECT_EQ(report.unfairness_total, report.unfairness_per_attribute[0].second);

  data.labels = c.scores;
  const auto labelled = evaluate(c.scores, data, attrs, {Task::kClassification, {}, 0.5});
  EXPECT_EQ(labelled.risk_mse, 0.0);
  EXPECT_EQ(labelled.accuracy, 1.0);
  EXPECT_EQ(labelled.f1, 1.0);
}

}  // namespace
}  // namespace seqfair

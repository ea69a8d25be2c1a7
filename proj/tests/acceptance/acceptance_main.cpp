// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "seqfair/metrics.hpp"
#include "seqfair/projection.hpp"
#include "seqfair/synthetic.hpp"
#include "support/data.hpp"

using namespace seqfair;
using seqfair::testing::mean_abs_diff;
using seqfair::testing::stddev;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("[%s] criterion %d: %s | %s\n", pass ? "PASS" : "FAIL", id, title.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void info(const std::string& line) {
  std::printf("       info: %s\n", line.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const std::vector<std::string> kAttrs{"A1", "A2", "A3"};
const std::vector<double> kExact(3, 0.0);

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

void criterion_1() {
  const std::vector<double> s{1, 2, 3, 2, 4, 6};
  const std::vector<std::string> g{"0", "0", "0", "1", "1", "1"};
  const auto step = fit_single_step(s, g, 0.0);
  const double a = apply_single_step(step, 2.0, "0");
  const double b = apply_single_step(step, 4.0, "1");
  const double err = std::max(std::abs(a - 3.0), std::abs(b - 3.0));
  report(1, err <= 1e-12, "hand-oracle projection",
         "f(2|0)=" + fmt("%.17g", a) + " f(4|1)=" + fmt("%.17g", b) + " max err " +
             fmt("%.3g", err) + " (tol 1e-12)");
}

void criterion_2() {
  std::vector<double> s;
  std::vector<std::string> g;
  for (int i = 0; i < 5000; ++i) {
    s.push_back(0.0);
    g.push_back("0");
    s.push_back(1.0);
    g.push_back("1");
  }
  const double u = unfairness_single(s, g, GridSpec{1000});
  report(2, std::abs(u - 0.5) <= 0.002, "unfairness oracle",
         "U=" + fmt("%.6f", u) + " target 0.5 +/- 0.002");
}

struct Exact {
  double baseline, after, seconds;
};

Exact exact_fairness(const Benchmark& b) {
  const auto start = Clock::now();
  const auto p = fit_sequential(b.unlabeled.data, kAttrs, kExact);
  const auto out = apply_sequential(p, b.test.data);
  const double secs = seconds_since(start);
  return {unfairness_total(b.test.data.scores, b.test.data, kAttrs).total,
          unfairness_total(out, b.test.data, kAttrs).total, secs};
}

void criterion_3(const Benchmark& shared, const Benchmark& independent) {
  const auto r = exact_fairness(shared);
  const double ratio = r.after / r.baseline;
  report(3, ratio <= 0.05 && r.seconds < 5.0, "exact fairness on synthetic data (shared latent)",
         "U_total " + fmt("%.4f", r.baseline) + " -> " + fmt("%.4f", r.after) + " = " +
             fmt("%.2f%%", 100 * ratio) + " of baseline (tol 5%), fit+transform " +
             fmt("%.3f", r.seconds) + " s (tol 5 s)");
  const auto i = exact_fairness(independent);
  info("independent attributes: U_total " + fmt("%.4f", i.baseline) + " -> " +
       fmt("%.4f", i.after) + " = " + fmt("%.2f%%", 100 * i.after / i.baseline) + " of baseline");
}

struct Permutations {
  double max_pair_diff = 0, max_risk_gap = 0, max_unfair_gap = 0, tol = 0;
};

Permutations permutations(const Benchmark& b) {
  Permutations out;
  out.tol = 0.05 * stddev(b.test.data.scores);
  // One jittered calibration sample shared by every ordering.
  Dataset calib = b.unlabeled.data;
  calib.scores = jitter_scores(calib.scores, {auto_jitter_amplitude(calib.scores), 0});
  FitOptions o;
  o.jitter_amplitude = 0.0;

  std::vector<std::string> order = kAttrs;
  std::vector<std::vector<double>> outputs;
  std::vector<double> risks, unfair;
  do {
    outputs.push_back(apply_sequential(fit_sequential(calib, order, kExact, o), b.test.data));
    risks.push_back(risk_mse(outputs.back(), *b.test.data.labels));
    unfair.push_back(unfairness_total(outputs.back(), b.test.data, kAttrs).total);
  } while (std::next_permutation(order.begin(), order.end()));

  for (std::size_t i = 0; i < outputs.size(); ++i) {
    for (std::size_t j = i + 1; j < outputs.size(); ++j) {
      out.max_pair_diff = std::max(out.max_pair_diff, mean_abs_diff(outputs[i], outputs[j]));
    }
  }
  out.max_risk_gap = *std::max_element(risks.begin(), risks.end()) -
                     *std::min_element(risks.begin(), risks.end());
  out.max_unfair_gap = *std::max_element(unfair.begin(), unfair.end()) -
                       *std::min_element(unfair.begin(), unfair.end());
  return out;
}

std::string describe(const Permutations& p) {
  return "max pairwise mean|diff| " + fmt("%.4f", p.max_pair_diff) + ", risk spread " +
         fmt("%.4f", p.max_risk_gap) + ", U_total spread " + fmt("%.4f", p.max_unfair_gap) +
         " (tol 0.05*sd = " + fmt("%.4f", p.tol) + ")";
}

void criterion_4(const Benchmark& shared, const Benchmark& independent) {
  const auto p = permutations(shared);
  const bool pass = p.max_pair_diff <= p.tol && p.max_risk_gap <= p.tol && p.max_unfair_gap <= p.tol;
  report(4, pass, "permutation equivalence over 6 orderings (shared latent)", describe(p));
  info("independent attributes: " + describe(permutations(independent)));
}

double sequential_vs_global(const Benchmark& b) {
  const auto seq = fit_sequential(b.unlabeled.data, kAttrs, kExact);
  const auto joint = fit_global_pipeline(b.unlabeled.data, kAttrs);
  return mean_abs_diff(apply_sequential(seq, b.test.data), apply_sequential(joint, b.test.data));
}

void criterion_5(const Benchmark& shared, const Benchmark& independent) {
  const double tol = 0.05 * stddev(shared.test.data.scores);
  const double d = sequential_vs_global(shared);
  report(5, d <= tol, "sequential = global joint (shared latent)",
         "mean|seq - joint| " + fmt("%.4f", d) + " (tol 0.05*sd = " + fmt("%.4f", tol) + ")");
  info("independent attributes: mean|seq - joint| " + fmt("%.4f", sequential_vs_global(independent)) +
       " (tol " + fmt("%.4f", 0.05 * stddev(independent.test.data.scores)) + ")");
}

struct Ray {
  bool exact = false, monotone = true;
  std::string trace;
};

Ray epsilon_ray(const Benchmark& b) {
  const auto& test = b.test.data;
  const auto& labels = *test.labels;
  Ray r;
  const auto identity =
      apply_sequential(fit_sequential(b.unlabeled.data, kAttrs, std::vector<double>(3, 1.0)), test);
  r.exact = identity == test.scores;

  const double base_mse = risk_mse(test.scores, labels);
  const double base_u = unfairness_total(test.scores, test, kAttrs).total;
  std::vector<double> mse, u;
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto out =
        apply_sequential(fit_sequential(b.unlabeled.data, kAttrs, std::vector<double>(3, t)), test);
    mse.push_back(risk_mse(out, labels));
    u.push_back(unfairness_total(out, test, kAttrs).total);
    r.trace += fmt(" eps=%.2f:", t) + fmt("(%.4f,", mse.back()) + fmt("%.4f)", u.back());
  }
  for (std::size_t k = 1; k < mse.size(); ++k) {
    r.monotone &= mse[k] <= mse[k - 1] + 0.02 * base_mse;
    r.monotone &= u[k] >= u[k - 1] - 0.02 * base_u;
  }
  return r;
}

void criterion_6(const Benchmark& shared, const Benchmark& independent) {
  const auto r = epsilon_ray(shared);
  report(6, r.exact && r.monotone, "epsilon endpoints and monotone ray (shared latent)",
         std::string("eps=(1,1,1) bit-exact: ") + (r.exact ? "yes" : "no") +
             "; (MSE,U_total) along ray" + r.trace + " (slack 2% of baseline)");
  const auto i = epsilon_ray(independent);
  info(std::string("independent attributes: bit-exact ") + (i.exact ? "yes" : "no") + ", monotone " +
       (i.monotone ? "yes" : "no") + ";" + i.trace);
}

void criterion_7(const Benchmark& b) {
  const std::vector<std::string> a1{"A1"};
  const auto& test = b.test.data;
  const double base = unfairness_single(test.scores, test.attribute("A1"));
  bool pass = true;
  std::string detail;
  for (double eps : {0.25, 0.5, 0.75}) {
    const auto out = apply_sequential(fit_sequential(b.unlabeled.data, a1, std::vector<double>{eps}), test);
    const double ratio = unfairness_single(out, test.attribute("A1")) / base;
    pass &= std::abs(ratio - eps) <= 0.10;
    detail += fmt("eps=%.2f", eps) + fmt(" -> ratio %.4f; ", ratio);
  }
  report(7, pass, "epsilon-RI tracking (single attribute)", detail + "tol +/- 0.10");
}

void criterion_9() {
  struct Suite {
    const char* binary;
    const char* filter;
  };
  const Suite suites[] = {
      {SEQFAIR_TEST_DISTRIBUTIONS, "DistributionProperty.*:WassersteinProperty.*"},
      {SEQFAIR_TEST_PROJECTION, "SequentialProperty.RankPreservedWithinGroups:Serialization.*"},
      {SEQFAIR_TEST_METRICS, "UnfairnessProperty.*"},
      {SEQFAIR_TEST_SYNTHETIC, "SplitProperty.*"},
  };
  const auto start = Clock::now();
  bool ok = true;
  for (const auto& s : suites) {
    const std::string cmd = std::string("\"") + s.binary + "\" --gtest_brief=1 --gtest_filter='" +
                            s.filter + "' > /dev/null 2>&1";
    ok &= std::system(cmd.c_str()) == 0;
  }
  const double secs = seconds_since(start);
  report(9, ok && secs < 60.0, "property suites",
         std::string("rank preservation, Galois, W2, round-trip, split, grid convergence: ") +
             (ok ? "all green" : "FAILURES") + ", " + fmt("%.2f", secs) + " s (tol 60 s)");
}

}  // namespace

int main() {
  SynthConfig config;  // n = 10000, shared latent, seed 0
  const Benchmark shared = make_benchmark(config);
  config.latent = LatentMode::kIndependent;
  const Benchmark independent = make_benchmark(config);

  criterion_1();
  criterion_2();
  criterion_3(shared, independent);
  criterion_4(shared, independent);
  criterion_5(shared, independent);
  criterion_6(shared, independent);
  criterion_7(shared);
  std::printf("[N/A ] criterion 8: census reproduction | needs external census data and a "
              "boosted base model; optional slot scripts/reproduce_census.sh (targets 0.378->0.019, "
              "0.354->0.009, +/- 0.01)\n");
  criterion_9();

  std::printf("%s: %d criterion(s) failed\n", failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED",
              failures);
  return failures ? 1 : 0;
}

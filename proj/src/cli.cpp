#include "seqfair/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "seqfair/dataio.hpp"
#include "seqfair/errors.hpp"
#include "seqfair/metrics.hpp"
#include "seqfair/projection.hpp"
#include "seqfair/sweep.hpp"
#include "seqfair/synthetic.hpp"

namespace seqfair::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

enum class OutputFormat { kCsv, kJson };

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  throw InvalidConfig("--output_format must be csv or json, got '" + s + "'");
}

std::optional<double> parse_jitter(const std::string& s) {
  if (s == "auto") return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidConfig("--jitter must be 'auto' or a non-negative number, got '" + s + "'");
  }
  return v;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string join_reals(const std::vector<double>& values, std::string_view sep) {
  std::vector<std::string> parts;
  for (double v : values) parts.push_back(format_real(v));
  return join(parts, sep);
}

void check_distinct(const std::vector<std::string>& names, const char* flag) {
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
    throw InvalidConfig(std::string(flag) + " lists an attribute more than once");
  }
}

// Writes to the named file, or to `fallback` when the name is empty or "-".
template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  fn(file);
  file.flush();
  if (!file) throw IoError("write to '" + path + "' failed");
}

std::string csv_cell(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// --- flat key/value documents -------------------------------------------

using FlatRow = std::vector<std::pair<std::string, std::optional<double>>>;

void write_flat_json(std::ostream& out, const FlatRow& row) {
  ordered_json doc = ordered_json::object();
  for (const auto& [k, v] : row) doc[k] = v ? ordered_json(*v) : ordered_json(nullptr);
  out << doc.dump(2) << '\n';
}

void write_flat_csv(std::ostream& out, const FlatRow& row) {
  for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i].first);
  out << '\n';
  for (std::size_t i = 0; i < row.size(); ++i) {
    out << (i ? "," : "") << (row[i].second ? format_real(*row[i].second) : "NA");
  }
  out << '\n';
}

FlatRow flatten(const MetricsReport& r) {
  FlatRow row;
  if (r.risk_mse) row.emplace_back("risk_mse", r.risk_mse);
  if (r.accuracy) row.emplace_back("accuracy", r.accuracy);
  if (r.f1) row.emplace_back("f1", r.f1);
  for (const auto& [name, u] : r.unfairness_per_attribute) row.emplace_back("unfairness_" + name, u);
  row.emplace_back("unfairness_total", r.unfairness_total);
  for (const auto& [name, ratio] : r.relative_improvement) {
    row.emplace_back("relative_improvement_" + name, ratio);
  }
  if (r.fit_seconds) row.emplace_back("fit_seconds", r.fit_seconds);
  if (r.transform_seconds) row.emplace_back("transform_seconds", r.transform_seconds);
  return row;
}

std::map<std::string, double> load_baseline_unfairness(const std::string& path,
                                                       const std::vector<std::string>& attrs) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(read_file(path));
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(path + ": malformed baseline report", "byte " + std::to_string(e.byte));
  }
  std::map<std::string, double> out;
  for (const auto& a : attrs) {
    const auto it = doc.find("unfairness_" + a);
    if (it == doc.end() || !it->is_number()) {
      throw SchemaError("baseline report '" + path + "' has no numeric 'unfairness_" + a + "'");
    }
    out[a] = it->get<double>();
  }
  return out;
}

// --- commands -------------------------------------------------------------

struct GenerateArgs {
  std::size_t n = 10000, d = 10, r = 3;
  double sigma_x = 0.15;
  std::vector<double> tau;
  std::vector<double> split = {0.5, 0.25, 0.25};
  std::string latent = "shared";
  std::string out_dir;
  std::uint64_t seed = 0;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  SynthConfig config;
  config.n = a.n;
  config.d = a.d;
  config.r = a.r;
  config.sigma_x = a.sigma_x;
  config.seed = a.seed;
  if (!a.tau.empty()) {
    config.tau = a.tau;
  } else if (a.r != 3) {
    config.tau.assign(a.r, 0.0);
  }
  if (a.split.size() != 3) throw InvalidConfig("split: expected three fractions");
  config.split = {a.split[0], a.split[1], a.split[2]};
  if (a.latent == "shared") {
    config.latent = LatentMode::kShared;
  } else if (a.latent == "independent") {
    config.latent = LatentMode::kIndependent;
  } else {
    throw InvalidConfig("latent: must be 'shared' or 'independent'");
  }
  config.validate();

  const Benchmark bench = make_benchmark(config);
  fs::create_directories(a.out_dir);
  ordered_json files = ordered_json::object();
  const std::pair<const char*, const BenchmarkSplit*> splits[] = {
      {"train", &bench.train}, {"test", &bench.test}, {"unlabeled", &bench.unlabeled}};
  for (const auto& [name, split] : splits) {
    if (split->data.size() == 0) continue;
    const std::string file = std::string(name) + ".csv";
    write_table(fs::path(a.out_dir) / file, split->data.source);
    files[name] = {{"path", file}, {"rows", split->data.size()}};
    out << file << ' ' << split->data.size() << " rows\n";
  }
  const ordered_json manifest = {
      {"generator", "seqfair synthetic benchmark"},
      {"config",
       {{"n", config.n},
        {"d", config.d},
        {"r", config.r},
        {"sigma_x", config.sigma_x},
        {"tau", config.tau},
        {"seed", config.seed},
        {"split", config.split},
        {"latent", a.latent}}},
      {"columns",
       {{"features", "x1..x" + std::to_string(config.d)},
        {"attributes", "A1..A" + std::to_string(config.r)},
        {"label", "y"},
        {"score", "score"}}},
      {"baseline_model",
       {{"kind", "ordinary least squares on [x, A] with intercept, fitted on train"},
        {"intercept", bench.model.intercept},
        {"coefficients", bench.model.coefficients}}},
      {"files", files},
  };
  std::ofstream m(fs::path(a.out_dir) / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!m) throw IoError("cannot write manifest.json in '" + a.out_dir + "'");
  m << manifest.dump(2) << '\n';
  return 0;
}

struct FitArgs {
  std::string data, score_col = "score", out, jitter = "auto", mode = "sequential";
  std::vector<std::string> attrs, order;
  std::vector<double> epsilons;
  std::uint64_t seed = 0;
  std::size_t max_knots = kDefaultMaxKnots;
  std::size_t min_group_size = 2;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
  check_distinct(a.attrs, "--attrs");
  const std::vector<std::string> order = a.order.empty() ? a.attrs : a.order;
  check_distinct(order, "--order");
  if (std::set<std::string>(order.begin(), order.end()) !=
      std::set<std::string>(a.attrs.begin(), a.attrs.end())) {
    throw InvalidConfig("--order must be a permutation of --attrs");
  }
  std::vector<double> eps = a.epsilons;
  if (eps.empty()) eps.assign(order.size(), 0.0);
  if (eps.size() == 1 && order.size() > 1) eps.assign(order.size(), eps.front());
  if (eps.size() != order.size()) {
    throw InvalidConfig("--epsilons has " + std::to_string(eps.size()) + " value(s) for " +
                        std::to_string(order.size()) + " attribute(s)");
  }
  if (a.mode != "sequential" && a.mode != "global") {
    throw InvalidConfig("--mode must be sequential or global");
  }
  if (a.mode == "global" && std::any_of(eps.begin(), eps.end(), [](double e) { return e != 0; })) {
    throw InvalidConfig("--mode global fits the exact-fair joint map; epsilons must be 0");
  }
  FitOptions options;
  options.jitter_amplitude = parse_jitter(a.jitter);
  options.seed = a.seed;
  options.max_knots = a.max_knots;
  options.min_group_size = a.min_group_size;
  options.fitted_on = fs::path(a.data).filename().string();
  if (options.max_knots == 0) throw InvalidConfig("--max-knots must be positive");

  const Dataset data = read_dataset(a.data, {a.score_col, a.attrs, std::nullopt});
  const auto start = Clock::now();
  const FairPipeline pipeline = a.mode == "global" ? fit_global_pipeline(data, order, options)
                                                   : fit_sequential(data, order, eps, options);
  const double elapsed = seconds_since(start);
  save_pipeline(a.out, pipeline);
  out << "fit_seconds=" << format_real(elapsed) << '\n';
  return 0;
}

struct TransformArgs {
  std::string pipeline, data, out, score_col = "score";
  bool jitter = false;
};

int cmd_transform(const TransformArgs& a, std::ostream& out) {
  const FairPipeline pipeline = load_pipeline(a.pipeline);
  Dataset data = read_dataset(a.data, {a.score_col, pipeline.order, std::nullopt});
  if (a.jitter) data.scores = jitter_scores(data.scores, pipeline.jitter);
  const auto start = Clock::now();
  const std::vector<double> fair = apply_sequential(pipeline, data);
  const double elapsed = seconds_since(start);
  write_scores(a.out, data, fair);
  out << "transform_seconds=" << format_real(elapsed) << '\n';
  return 0;
}

struct EvaluateArgs {
  std::string data, score_col = "score", label_col, task = "reg", baseline, out,
                    format = "json";
  std::vector<std::string> attrs;
  std::size_t grid_T = 1000;
  double threshold = 0.5;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const OutputFormat format = parse_format(a.format);
  EvaluateOptions options;
  if (a.task == "reg") {
    options.task = Task::kRegression;
  } else if (a.task == "clf") {
    options.task = Task::kClassification;
  } else {
    throw InvalidConfig("--task must be reg or clf");
  }
  options.grid.nodes = a.grid_T;
  options.grid.validate();
  options.threshold = a.threshold;

  std::optional<std::string> label;
  if (!a.label_col.empty()) label = a.label_col;
  const Dataset data = read_dataset(a.data, {a.score_col, a.attrs, label});
  MetricsReport report = evaluate(data.scores, data, a.attrs, options);
  if (!a.baseline.empty()) {
    std::map<std::string, double> corrected;
    for (const auto& [name, u] : report.unfairness_per_attribute) corrected[name] = u;
    report.relative_improvement =
        relative_improvement(load_baseline_unfairness(a.baseline, a.attrs), corrected);
  }
  with_output(a.out, out, [&](std::ostream& os) {
    format == OutputFormat::kJson ? write_flat_json(os, flatten(report))
                                  : write_flat_csv(os, flatten(report));
  });
  return 0;
}

struct SweepArgs {
  std::string data, eval, score_col = "score", label_col, mode = "paths", out, format = "csv",
                              jitter = "auto";
  std::vector<std::string> attrs;
  std::vector<double> grid_values = {0.0, 0.5, 1.0};
  bool dedup = false;
  std::uint64_t seed = 0;
  std::size_t grid_T = 1000;
};

std::string describe_path(const SweepRow& row) {
  std::vector<std::string> alternatives;
  for (const auto& p : row.equivalent_paths) alternatives.push_back(p.empty() ? "baseline" : join(p, ">"));
  if (alternatives.empty()) alternatives.push_back(row.path.empty() ? "baseline" : join(row.path, ">"));
  return join(alternatives, ";");
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const OutputFormat format = parse_format(a.format);
  check_distinct(a.attrs, "--attrs");
  if (a.mode != "paths" && a.mode != "epsilon-grid") {
    throw InvalidConfig("--mode must be paths or epsilon-grid");
  }
  if (a.mode == "paths" && a.attrs.size() > kMaxPathAttributes) {
    throw InvalidConfig("paths mode refuses more than " + std::to_string(kMaxPathAttributes) +
                        " attributes (power-set explosion)");
  }
  for (double e : a.grid_values) {
    if (!(e >= 0.0 && e <= 1.0)) throw InvalidEpsilon("--grid values must lie in [0, 1]");
  }
  SweepOptions options;
  options.fit.jitter_amplitude = parse_jitter(a.jitter);
  options.fit.seed = a.seed;
  options.fit.fitted_on = fs::path(a.data).filename().string();
  options.grid.nodes = a.grid_T;
  options.grid.validate();
  options.dedup = a.dedup;

  std::optional<std::string> label;
  if (!a.label_col.empty()) label = a.label_col;
  const Dataset calibration = read_dataset(a.data, {a.score_col, a.attrs, std::nullopt});
  const Dataset evaluation =
      read_dataset(a.eval.empty() ? a.data : a.eval, {a.score_col, a.attrs, label});

  const auto rows =
      a.mode == "paths"
          ? sweep_paths(calibration, evaluation, a.attrs, options)
          : sweep_epsilon_grid(calibration, evaluation, a.attrs,
                               epsilon_lattice(a.grid_values, a.attrs.size()), options);

  with_output(a.out, out, [&](std::ostream& os) {
    if (format == OutputFormat::kJson) {
      ordered_json doc = ordered_json::array();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        ordered_json j = {{"path_id", i}, {"path", describe_path(row)}, {"epsilons", row.epsilons}};
        j["risk_mse"] = row.risk_mse ? ordered_json(*row.risk_mse) : ordered_json(nullptr);
        for (const auto& [name, u] : row.unfairness.per_attribute) j["unfairness_" + name] = u;
        j["unfairness_total"] = row.unfairness.total;
        j["fit_seconds"] = row.fit_seconds;
        j["transform_seconds"] = row.transform_seconds;
        doc.push_back(std::move(j));
      }
      os << doc.dump(2) << '\n';
      return;
    }
    os << "path_id,path,epsilons,risk_mse";
    for (const auto& name : a.attrs) os << ',' << csv_cell("unfairness_" + name);
    os << ",unfairness_total,fit_seconds,transform_seconds\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      os << i << ',' << csv_cell(describe_path(row)) << ',' << join_reals(row.epsilons, ";") << ','
         << (row.risk_mse ? format_real(*row.risk_mse) : "NA");
      for (const auto& [name, u] : row.unfairness.per_attribute) os << ',' << format_real(u);
      os << ',' << format_real(row.unfairness.total) << ',' << format_real(row.fit_seconds) << ','
         << format_real(row.transform_seconds) << '\n';
    }
  });
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential Wasserstein-barycenter fairness post-processing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "seqfair 1.0");

  auto add_seed = [](CLI::App* cmd, std::uint64_t& seed) {
    cmd->add_option("--seed", seed, "RNG seed")->envname("SEQFAIR_SEED");
  };

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write the synthetic benchmark splits");
  generate->add_option("--n", gen.n, "Number of rows")->capture_default_str();
  generate->add_option("--d", gen.d, "Number of non-sensitive features")->capture_default_str();
  generate->add_option("--r", gen.r, "Number of binary sensitive attributes")->capture_default_str();
  generate->add_option("--sigma-x", gen.sigma_x, "Feature variance")->capture_default_str();
  generate->add_option("--tau", gen.tau, "Attribute thresholds (default 0,0.05,0.1)")->delimiter(',');
  generate->add_option("--split", gen.split, "train,test,unlabeled fractions")
      ->delimiter(',')
      ->capture_default_str();
  generate->add_option("--latent", gen.latent, "shared | independent")->capture_default_str();
  generate->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  add_seed(generate, gen.seed);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a fairness pipeline on calibration data");
  fit_cmd->add_option("--data", fit.data, "Calibration CSV")->required();
  fit_cmd->add_option("--score-col", fit.score_col, "Score column")->capture_default_str();
  fit_cmd->add_option("--attrs", fit.attrs, "Sensitive attribute columns")->delimiter(',')->required();
  fit_cmd->add_option("--order", fit.order, "Application order (default: --attrs)")->delimiter(',');
  fit_cmd->add_option("--epsilons", fit.epsilons, "Per-step epsilon, aligned with the order")
      ->delimiter(',');
  fit_cmd->add_option("--out", fit.out, "Pipeline file to write")->required();
  fit_cmd->add_option("--jitter", fit.jitter, "Ingestion jitter half-width or 'auto'")
      ->capture_default_str();
  fit_cmd->add_option("--max-knots", fit.max_knots, "Quantile knots kept per group")
      ->capture_default_str();
  fit_cmd->add_option("--mode", fit.mode, "sequential | global")->capture_default_str();
  fit_cmd->add_option("--min-group-size", fit.min_group_size, "Minimum rows per joint cell (global)")
      ->capture_default_str();
  add_seed(fit_cmd, fit.seed);

  TransformArgs tr;
  auto* transform = app.add_subcommand("transform", "Apply a fitted pipeline, appending fair_score");
  transform->add_option("--pipeline", tr.pipeline, "Pipeline file")->required();
  transform->add_option("--data", tr.data, "Input CSV")->required();
  transform->add_option("--out", tr.out, "Output CSV")->required();
  transform->add_option("--score-col", tr.score_col, "Score column")->capture_default_str();
  transform->add_flag("--jitter", tr.jitter, "Apply the pipeline's ingestion jitter to the input");

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Report risk and unfairness metrics");
  evaluate_cmd->add_option("--data", ev.data, "CSV to evaluate")->required();
  evaluate_cmd->add_option("--score-col", ev.score_col, "Score column")->capture_default_str();
  evaluate_cmd->add_option("--attrs", ev.attrs, "Sensitive attribute columns")
      ->delimiter(',')
      ->required();
  evaluate_cmd->add_option("--label-col", ev.label_col, "Label column (enables risk metrics)");
  evaluate_cmd->add_option("--task", ev.task, "reg | clf")->capture_default_str();
  evaluate_cmd->add_option("--baseline", ev.baseline, "Baseline report (JSON) for ratios");
  evaluate_cmd->add_option("--grid-T", ev.grid_T, "Quantile grid nodes")->capture_default_str();
  evaluate_cmd->add_option("--threshold", ev.threshold, "Classification threshold")
      ->capture_default_str();
  evaluate_cmd->add_option("--output_format,--output-format", ev.format, "csv | json")
      ->capture_default_str();
  evaluate_cmd->add_option("--out", ev.out, "Report file (default: standard output)");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Tabulate debiasing paths or an epsilon grid");
  sweep->add_option("--data", sw.data, "Calibration CSV")->required();
  sweep->add_option("--eval", sw.eval, "Evaluation CSV (default: --data)");
  sweep->add_option("--score-col", sw.score_col, "Score column")->capture_default_str();
  sweep->add_option("--label-col", sw.label_col, "Label column of the evaluation CSV");
  sweep->add_option("--attrs", sw.attrs, "Sensitive attribute columns")->delimiter(',')->required();
  sweep->add_option("--mode", sw.mode, "paths | epsilon-grid")->capture_default_str();
  sweep->add_option("--grid", sw.grid_values, "Epsilon values per attribute (lattice)")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_flag("--dedup", sw.dedup, "Collapse paths with the same attribute set");
  sweep->add_option("--jitter", sw.jitter, "Ingestion jitter half-width or 'auto'")
      ->capture_default_str();
  sweep->add_option("--grid-T", sw.grid_T, "Quantile grid nodes")->capture_default_str();
  sweep->add_option("--output_format,--output-format", sw.format, "csv | json")
      ->capture_default_str();
  sweep->add_option("--out", sw.out, "Table file (default: standard output)");
  add_seed(sweep, sw.seed);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) argv_rev.pop_back();
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    if (transform->parsed()) return cmd_transform(tr, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(ev, out);
    if (sweep->parsed()) return cmd_sweep(sw, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace seqfair::cli

/*
 * Copyright 2026 The discgp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>

#include <CLI11.hpp>

#include "discgp/benchmark.hpp"
#include "discgp/csv.hpp"
#include "discgp/design.hpp"
#include "discgp/gp_model.hpp"
#include "discgp/hyperopt.hpp"
#include "discgp/kernel_config.hpp"
#include "run_config.hpp"

namespace {

using namespace discgp;
using namespace discgp::cli;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Usage and config problems map to exit code 2.
struct UsageError : Error {
  using Error::Error;
};

std::vector<std::string> metadata(std::uint64_t seed, const nlohmann::json &canonical) {
  return {std::string("discgp ") + DISCGP_VERSION, "seed: " + std::to_string(seed),
          "config_hash: " + hex64(config_hash(canonical))};
}

std::vector<std::string> axis_header(int d, const char *stem = "x") {
  std::vector<std::string> h;
  for (int j = 0; j < d; ++j)
    h.push_back(stem + std::to_string(j));
  return h;
}

// ---------------------------------------------------------------- design

struct DesignArgs {
  int n = 0;
  int d = 0;
  std::string domain = "0,1";
  std::uint64_t seed = 0;
  std::string out;
  int iters = 100;
  std::string placement = "center";
};

int run_design(const DesignArgs &a) {
  DesignSpec spec;
  spec.n = a.n;
  spec.d = a.d;
  spec.seed = a.seed;
  spec.optimize_iters = a.iters;
  try {
    spec.domain = parse_domain(a.domain, a.d);
    spec.placement = placement_from_string(a.placement);
    spec.validate();
  } catch (const InputError &e) {
    throw UsageError(e.what());
  }
  const Design design = maximin_lhs(spec);
  const nlohmann::json canonical = {{"command", "design"}, {"n", a.n},     {"d", a.d},
                                    {"domain", a.domain},  {"seed", a.seed}, {"iters", a.iters},
                                    {"placement", a.placement}};
  const std::string out = resolve_output(a.out);
  write_file_atomic(out, format_csv(metadata(a.seed, canonical), axis_header(a.d), design.points));
  std::cout << "min_dist " << format_double(design.min_dist) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------- fit

struct FitArgs {
  std::string train;
  std::string kernel;
  std::string test;
  std::string out;
  std::string model_out;
  std::string domain;
  bool no_optimize = false;
  int restarts = 10;
  int max_evals = 2000;
  std::uint64_t seed = 0;
};

/// Splits a table into inputs and the optional "y" column (the last column
/// when `require_y` and no column is named y).
std::pair<PointSet, std::optional<Vector>> split_table(const CsvTable &t, bool require_y) {
  const auto it = std::find(t.header.begin(), t.header.end(), "y");
  Eigen::Index ycol = -1;
  if (it != t.header.end())
    ycol = it - t.header.begin();
  else if (require_y)
    ycol = static_cast<Eigen::Index>(t.header.size()) - 1;
  if (ycol < 0)
    return {t.values, std::nullopt};
  if (t.values.cols() < 2)
    throw InputError("table needs at least one input column besides y");
  PointSet X(t.values.rows(), t.values.cols() - 1);
  for (Eigen::Index c = 0, k = 0; c < t.values.cols(); ++c)
    if (c != ycol)
      X.col(k++) = t.values.col(c);
  return {X, Vector(t.values.col(ycol))};
}

Box bounding_box(const PointSet &X) {
  std::vector<double> lo(X.cols()), hi(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    lo[j] = X.col(j).minCoeff();
    hi[j] = X.col(j).maxCoeff();
    if (!(hi[j] > lo[j])) {
      lo[j] -= 0.5;
      hi[j] += 0.5;
    }
  }
  return Box(lo, hi);
}

int run_fit(const FitArgs &a) {
  // Every input is parsed and checked before anything is written.
  TrainingSet ts;
  PointSet Xt;
  std::optional<Vector> yt;
  Kernel kernel = Kernel::squared_exp(1);
  Box domain;
  try {
    auto [X, y] = split_table(read_csv(a.train), true);
    ts = TrainingSet{X, *y};
    ts.validate();
    std::tie(Xt, yt) = split_table(read_csv(a.test), false);
    kernel = load_kernel(a.kernel);
    if (kernel.dim() != ts.dim())
      throw InputError("kernel dimension " + std::to_string(kernel.dim()) +
                       " does not match " + std::to_string(ts.dim()) + " training columns");
    if (Xt.cols() != ts.dim())
      throw InputError("test set has " + std::to_string(Xt.cols()) + " input columns, expected " +
                       std::to_string(ts.dim()));
    domain = a.domain.empty() ? bounding_box(ts.X) : parse_domain(a.domain, ts.dim());
    check_duplicates(ts.X);
  } catch (const InputError &e) {
    throw UsageError(e.what());
  }

  std::optional<MLResult> ml;
  if (!a.no_optimize) {
    MLProblem prob{kernel, ts, default_bounds(kernel, domain, bounds_variance(ts.y)), a.restarts,
                   a.seed, a.max_evals};
    ml = maximize_likelihood(prob);
    kernel = ml->best_kernel;
  }
  const FittedGP gp = FittedGP::fit(kernel, ts);
  const auto preds = gp.predict_batch(Xt);

  PointSet table(static_cast<Eigen::Index>(preds.size()), 2);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    table(static_cast<Eigen::Index>(i), 0) = preds[i].mean;
    table(static_cast<Eigen::Index>(i), 1) = preds[i].variance;
  }
  const nlohmann::json canonical = {{"command", "fit"},
                                    {"kernel", to_json(load_kernel(a.kernel))},
                                    {"optimize", !a.no_optimize},
                                    {"restarts", a.restarts},
                                    {"max_evals", a.max_evals},
                                    {"seed", a.seed},
                                    {"domain", a.domain}};
  const auto meta = metadata(a.seed, canonical);
  nlohmann::json model = to_json(gp);
  model["metadata"] = meta;
  if (ml)
    model["optimisation"] = to_json(*ml);

  const std::string out = resolve_output(a.out);
  std::string model_out = a.model_out;
  if (model_out.empty())
    model_out = std::filesystem::path(a.out).replace_extension(".model.json").string();
  model_out = resolve_output(model_out);
  write_file_atomic(out, format_csv(meta, {"mean", "variance"}, table));
  write_file_atomic(model_out, model.dump(2) + '\n');

  std::cout << "log_likelihood " << format_double(gp.log_likelihood()) << '\n';
  std::cout << "mu_hat " << format_double(gp.mu_hat()) << '\n';
  std::cout << "jitter " << format_double(gp.jitter_used()) << '\n';
  if (ml)
    for (const auto &w : ml->boundary_warnings())
      std::cerr << "warning: " << w << '\n';
  if (yt) {
    std::vector<double> mean(preds.size());
    std::transform(preds.begin(), preds.end(), mean.begin(), [](auto &p) { return p.mean; });
    std::cout << "rmse " << format_double(rmse(std::span<const double>(yt->data(), yt->size()), mean))
              << '\n';
  }
  return kExitOk;
}

// ------------------------------------------------------------- benchmark

struct BenchArgs {
  std::string config;
  std::string out_dir;
  std::optional<int> threads;
  std::optional<int> replicates;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_test;
  std::optional<int> restarts;
  bool details = false;
};

void print_table(const std::vector<MethodSummary> &summary) {
  std::cout << std::left << std::setw(18) << "method" << std::right << std::setw(14) << "median"
            << std::setw(14) << "q1" << std::setw(14) << "q3" << std::setw(10) << "failures"
            << '\n';
  for (const auto &s : summary) {
    std::cout << std::left << std::setw(18) << s.method << std::right << std::setprecision(6)
              << std::setw(14) << s.median << std::setw(14) << s.q1 << std::setw(14) << s.q3
              << std::setw(10) << s.failures << '\n';
  }
}

int run_benchmark(const BenchArgs &a) {
  RunConfig rc;
  ExperimentConfig cfg;
  try {
    rc = RunConfig::load(a.config);
    if (a.threads)
      rc.threads = *a.threads;
    if (a.replicates)
      rc.replicates = *a.replicates;
    if (a.seed)
      rc.master_seed = *a.seed;
    if (a.n_test)
      rc.n_test = *a.n_test;
    if (a.restarts)
      rc.n_restarts = *a.restarts;
    if (!a.out_dir.empty())
      rc.output_dir = a.out_dir;
    if (rc.threads < 0)
      throw InputError("threads must be non-negative");
    cfg = rc.to_experiment();
    cfg.validate();
  } catch (const InputError &e) {
    throw UsageError(e.what());
  }

  const std::filesystem::path dir = resolve_output(rc.output_dir);
  std::filesystem::create_directories(dir);
  auto meta = metadata(rc.master_seed, rc.canonical());
  meta.push_back("seed_scheme: " + SeedScheme::describe());

  RowWriter rows((dir / "results.csv").string(), meta, results_header());
  std::ofstream details;
  if (a.details) {
    details.open(dir / "details.jsonl", std::ios::trunc);
    if (!details)
      throw Error("cannot write '" + (dir / "details.jsonl").string() + "'");
  }
  std::size_t done = 0;
  const std::size_t total = cfg.functions.size() * cfg.methods.size() * cfg.replicates;
  const auto results = run_experiment(cfg, [&](const ExperimentResult &r) {
    rows.write_row(result_cells(r));
    if (details.is_open())
      details << to_json(r).dump() << '\n' << std::flush;
    ++done;
    std::cerr << "[" << done << "/" << total << "] " << r.function << " " << r.method << " rep "
              << r.replicate << " rmse " << format_double(r.rmse)
              << (r.ok ? "" : " (" + r.status + ")") << '\n';
  });

  const auto summary = summarize(results);
  std::string text;
  for (const auto &m : meta)
    text += "# " + m + '\n';
  const auto join = [](const std::vector<std::string> &cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i)
      line += (i ? "," : "") + cells[i];
    return line + '\n';
  };
  text += join(summary_header());
  for (const auto &s : summary)
    text += join(summary_cells(s));
  write_file_atomic((dir / "summary.csv").string(), text);
  print_table(summary);
  return kExitOk;
}

/// CLI11 reads "-2,2" as a flag; glue such values onto their option.
std::vector<std::string> normalise_args(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--domain" && i + 1 < args.size()) {
      out.push_back("--domain=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Gaussian-process emulators for functions with discontinuities", "discgp"};
  app.set_version_flag("--version", std::string(DISCGP_VERSION));
  app.require_subcommand(1);

  DesignArgs da;
  auto *design = app.add_subcommand("design", "Generate a maximin Latin-hypercube design");
  design->add_option("--n", da.n, "Number of points")->required();
  design->add_option("--d", da.d, "Input dimension")->required();
  design->add_option("--domain", da.domain, "lo,hi or lo,hi;lo,hi;... per axis");
  design->add_option("--seed", da.seed, "Random seed");
  design->add_option("--out", da.out, "Output CSV")->required();
  design->add_option("--iters", da.iters, "Annealing temperature steps");
  design->add_option("--placement", da.placement, "center or random");

  FitArgs fa;
  auto *fitcmd = app.add_subcommand("fit", "Fit a GP and predict at test points");
  fitcmd->add_option("--train", fa.train, "Training CSV (inputs and a y column)")->required();
  fitcmd->add_option("--kernel", fa.kernel, "Kernel config")->required();
  fitcmd->add_option("--test", fa.test, "Test-point CSV")->required();
  fitcmd->add_option("--out", fa.out, "Predictions CSV")->required();
  fitcmd->add_option("--model-out", fa.model_out, "Fitted model document");
  fitcmd->add_option("--domain", fa.domain, "Domain for fitting bounds");
  fitcmd->add_flag("--no-optimize", fa.no_optimize, "Use the kernel parameters as given");
  fitcmd->add_option("--restarts", fa.restarts, "Likelihood restarts");
  fitcmd->add_option("--max-evals", fa.max_evals, "Evaluations per restart");
  fitcmd->add_option("--seed", fa.seed, "Restart seed");

  BenchArgs ba;
  auto *bench = app.add_subcommand("benchmark", "Run a replicated emulator comparison");
  bench->add_option("--config", ba.config, "Benchmark config")->required();
  bench->add_option("--out-dir", ba.out_dir, "Output directory");
  bench->add_option("--threads", ba.threads, "Worker threads (0 = all cores)");
  bench->add_option("--replicates", ba.replicates, "Override replicates");
  bench->add_option("--seed", ba.seed, "Override master seed");
  bench->add_option("--n-test", ba.n_test, "Override test-set size");
  bench->add_option("--restarts", ba.restarts, "Override likelihood restarts");
  bench->add_flag("--details", ba.details, "Also write details.jsonl");

  try {
    auto args = normalise_args(argc, argv);
    app.parse(args);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*design)
      return run_design(da);
    if (*fitcmd)
      return run_fit(fa);
    return run_benchmark(ba);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OptimizationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto &d : e.diagnostics())
      std::cerr << "  " << d << '\n';
    return kExitRuntime;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "discgp/design.hpp"
#include "discgp/kernel.hpp"

namespace discgp {

enum class TestFunctionKind { StepFn, NonstatFn, UserDefined };

/// Benchmark target with its input domain.
struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::StepFn;
  int d = 1;
  Box domain;
  std::string name;
  /// StepFn: f = -1 for x_1 <= jump, +1 otherwise.
  double jump = 0.0;
  std::function<double(std::span<const double>)> user;

  /// Step on [-2, 2]^d unless another domain is given.
  static TestFunction step(int d, double jump = 0.0);
  static TestFunction step(Box domain, double jump = 0.0);
  /// sin(30 (x - 0.9)^4) cos(2 (x - 0.9)) + (x - 0.9) / 2 on [0, 1].
  static TestFunction nonstationary();
  static TestFunction user_defined(std::string name, Box domain,
                                   std::function<double(std::span<const double>)> f);

  /// Throws InputError outside the domain or on dimension mismatch.
  double operator()(std::span<const double> x) const;
};

inline double eval_test_function(const TestFunction &tf, std::span<const double> x) {
  return tf(x);
}

/// Root mean square of truth - pred.
double rmse(std::span<const double> truth, std::span<const double> pred);

/// A labelled kernel family. When enumerate_axes is set, one model is fitted
/// per input axis (the axis of the Gibbs length-scale or warp) and the one
/// with the highest likelihood is kept.
struct MethodSpec {
  std::string label;
  std::function<Kernel(int d)> make;
  bool enumerate_axes = false;
};

/// SquarExp, Mat32, NeurNet, Gibbs-{Erf,Logistic,Tanh,Arctan} and
/// Warp-{Erf,Logistic,Tanh,Arctan} with a squared-exponential base kernel.
std::vector<MethodSpec> standard_methods();
/// Any standard label plus Exp, Mat52, NeurNetShifted and Gibbs-Quadratic.
MethodSpec method_by_label(const std::string &label);

struct ExperimentConfig {
  std::vector<TestFunction> functions;
  std::vector<MethodSpec> methods;
  int replicates = 20;
  /// 0 means 10 * d.
  int n_train = 0;
  int n_test = 1000;
  std::uint64_t master_seed = 1;
  int n_restarts = 10;
  int max_evals = 2000;
  /// Worker threads; 0 means hardware concurrency.
  int threads = 1;
  StratumPlacement placement = StratumPlacement::Center;

  void validate() const;
};

struct ExperimentResult {
  std::string function;
  int dim = 0;
  std::string method;
  int replicate = 0;
  std::uint64_t seed = 0;
  double rmse = 0.0;
  int n_train = 0;
  int n_test = 0;
  double jitter = 0.0;
  double wall_ms = 0.0;
  bool ok = false;
  /// "ok" or "failed: <reason>".
  std::string status;
  std::vector<std::pair<std::string, double>> params;
  double loglik = 0.0;
  int axis = -1;
  /// Share of test points with |error| > 0.5.
  double large_error_fraction = 0.0;
};

/// Seeds derived from the master seed for function f, replicate r, method m:
///   test set   master + 1000000 f + 999
///   design     master + 1000000 f + 1000 r + 998
///   ML starts  master + 1000000 f + 1000 r + m
struct SeedScheme {
  static std::uint64_t test_set(std::uint64_t master, int f);
  static std::uint64_t design(std::uint64_t master, int f, int r);
  static std::uint64_t method(std::uint64_t master, int f, int r, int m);
  static std::string describe();
};

/// Runs every (function, replicate, method) cell. Cells are independent and
/// seeded individually, so the results do not depend on the thread count.
/// `on_result` sees rows in cell order (function, replicate, method), each as
/// soon as it and all earlier cells are done.
std::vector<ExperimentResult>
run_experiment(const ExperimentConfig &cfg,
               const std::function<void(const ExperimentResult &)> &on_result = {});

/// One cell of run_experiment.
ExperimentResult run_cell(const ExperimentConfig &cfg, int f, int r, int m);

struct MethodSummary {
  std::string method;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
  int count = 0;
  int failures = 0;
};

/// Quantile by linear interpolation between order statistics: with sorted
/// values v_0..v_{n-1}, position h = (n - 1) p and
/// Q(p) = v_floor(h) + (h - floor(h)) (v_floor(h)+1 - v_floor(h)).
double quantile_linear(std::vector<double> values, double p);

/// Per-method five-number summary and mean of the successful rows, in order
/// of first appearance. Failed rows are counted but excluded.
std::vector<MethodSummary> summarize(const std::vector<ExperimentResult> &results);

std::vector<std::string> results_header();
std::vector<std::string> result_cells(const ExperimentResult &r);
std::vector<std::string> summary_header();
std::vector<std::string> summary_cells(const MethodSummary &s);
nlohmann::json to_json(const ExperimentResult &r);

} // namespace discgp

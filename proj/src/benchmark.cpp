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

#include "discgp/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "discgp/csv.hpp"
#include "discgp/gp_model.hpp"
#include "discgp/hyperopt.hpp"
#include "discgp/kernel_config.hpp"

namespace discgp {

TestFunction TestFunction::step(int d, double jump) { return step(Box::uniform(d, -2.0, 2.0), jump); }

TestFunction TestFunction::step(Box domain, double jump) {
  TestFunction tf;
  tf.kind = TestFunctionKind::StepFn;
  tf.d = domain.dim();
  tf.domain = std::move(domain);
  tf.name = "step";
  tf.jump = jump;
  return tf;
}

TestFunction TestFunction::nonstationary() {
  TestFunction tf;
  tf.kind = TestFunctionKind::NonstatFn;
  tf.d = 1;
  tf.domain = Box::uniform(1, 0.0, 1.0);
  tf.name = "nonstat";
  return tf;
}

TestFunction TestFunction::user_defined(std::string name, Box domain,
                                        std::function<double(std::span<const double>)> f) {
  TestFunction tf;
  tf.kind = TestFunctionKind::UserDefined;
  tf.d = domain.dim();
  tf.domain = std::move(domain);
  tf.name = std::move(name);
  tf.user = std::move(f);
  return tf;
}

double TestFunction::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d)
    throw InputError("test function '" + name + "' expects dimension " + std::to_string(d));
  if (!domain.contains(x))
    throw InputError("point outside the domain of test function '" + name + "'");
  switch (kind) {
  case TestFunctionKind::StepFn:
    return x[0] <= jump ? -1.0 : 1.0;
  case TestFunctionKind::NonstatFn: {
    const double t = x[0] - 0.9;
    return std::sin(30.0 * t * t * t * t) * std::cos(2.0 * t) + t / 2.0;
  }
  case TestFunctionKind::UserDefined:
    return user(x);
  }
  return 0.0;
}

double rmse(std::span<const double> truth, std::span<const double> pred) {
  if (truth.size() != pred.size())
    throw InputError("rmse: " + std::to_string(truth.size()) + " truths vs " +
                     std::to_string(pred.size()) + " predictions");
  if (truth.empty())
    throw InputError("rmse: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = truth[i] - pred[i];
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(truth.size()));
}

namespace {

MethodSpec gibbs_method(const std::string &label, LengthScaleKind kind) {
  return {label,
          [kind](int d) {
            LengthScaleFn f{kind, 1.0, LengthScaleFn::c2_limit(kind) + 1.0, 0};
            return Kernel::gibbs(d, 1.0, f);
          },
          kind != LengthScaleKind::Constant && kind != LengthScaleKind::Quadratic};
}

MethodSpec warp_method(const std::string &label, WarpKind kind) {
  return {label,
          [kind](int d) { return Kernel::warped(WarpMap{kind, 1.0, 0, 1.0}, Kernel::squared_exp(d)); },
          true};
}

} // namespace

std::vector<MethodSpec> standard_methods() {
  return {
      {"SquarExp", [](int d) { return Kernel::squared_exp(d); }, false},
      {"Mat32", [](int d) { return Kernel::matern32(d); }, false},
      {"NeurNet", [](int d) { return Kernel::neural_net(d); }, false},
      gibbs_method("Gibbs-Erf", LengthScaleKind::Erf),
      gibbs_method("Gibbs-Logistic", LengthScaleKind::Logistic),
      gibbs_method("Gibbs-Tanh", LengthScaleKind::Tanh),
      gibbs_method("Gibbs-Arctan", LengthScaleKind::Arctan),
      warp_method("Warp-Erf", WarpKind::Erf),
      warp_method("Warp-Logistic", WarpKind::Logistic),
      warp_method("Warp-Tanh", WarpKind::Tanh),
      warp_method("Warp-Arctan", WarpKind::Arctan),
  };
}

MethodSpec method_by_label(const std::string &label) {
  for (auto &m : standard_methods()) {
    if (m.label == label)
      return m;
  }
  if (label == "Exp")
    return {label, [](int d) { return Kernel::exponential(d); }, false};
  if (label == "Mat52")
    return {label, [](int d) { return Kernel::matern52(d); }, false};
  if (label == "NeurNetShifted")
    return {label,
            [](int d) {
              return Kernel::neural_net_shifted(1.0, std::vector<double>(d + 1, 1.0),
                                                std::vector<double>(d, 0.0));
            },
            false};
  if (label == "Gibbs-Quadratic")
    return gibbs_method(label, LengthScaleKind::Quadratic);
  throw InputError("unknown method '" + label + "'");
}

void ExperimentConfig::validate() const {
  if (functions.empty())
    throw InputError("experiment needs at least one test function");
  if (methods.empty())
    throw InputError("experiment needs at least one method");
  if (replicates < 1)
    throw InputError("replicates must be at least 1");
  if (n_test < 1)
    throw InputError("n_test must be at least 1");
  if (n_train < 0 || n_train == 1)
    throw InputError("n_train must be 0 (meaning 10 d) or at least 2");
  if (n_restarts < 1 || max_evals < 1)
    throw InputError("optimiser restarts and evaluation budget must be positive");
  if (methods.size() >= 998)
    throw InputError("too many methods for the seed scheme");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      if (methods[i].label == methods[j].label)
        throw InputError("duplicate method label '" + methods[i].label + "'");
    }
  }
}

std::uint64_t SeedScheme::test_set(std::uint64_t master, int f) {
  return master + 1000000ULL * static_cast<std::uint64_t>(f) + 999;
}
std::uint64_t SeedScheme::design(std::uint64_t master, int f, int r) {
  return master + 1000000ULL * static_cast<std::uint64_t>(f) +
         1000ULL * static_cast<std::uint64_t>(r) + 998;
}
std::uint64_t SeedScheme::method(std::uint64_t master, int f, int r, int m) {
  return master + 1000000ULL * static_cast<std::uint64_t>(f) +
         1000ULL * static_cast<std::uint64_t>(r) + static_cast<std::uint64_t>(m);
}
std::string SeedScheme::describe() {
  return "seed(test)=master+1000000*f+999; seed(design)=master+1000000*f+1000*r+998; "
         "seed(method)=master+1000000*f+1000*r+m";
}

ExperimentResult run_cell(const ExperimentConfig &cfg, int f, int r, int m) {
  const auto &tf = cfg.functions[f];
  const auto &method = cfg.methods[m];
  const auto start = std::chrono::steady_clock::now();

  ExperimentResult res;
  res.function = tf.name;
  res.dim = tf.d;
  res.method = method.label;
  res.replicate = r;
  res.seed = SeedScheme::method(cfg.master_seed, f, r, m);
  res.n_train = cfg.n_train > 0 ? cfg.n_train : 10 * tf.d;
  res.n_test = cfg.n_test;
  res.rmse = std::numeric_limits<double>::quiet_NaN();
  res.jitter = std::numeric_limits<double>::quiet_NaN();
  res.loglik = std::numeric_limits<double>::quiet_NaN();

  try {
    DesignSpec ds;
    ds.n = res.n_train;
    ds.d = tf.d;
    ds.domain = tf.domain;
    ds.seed = SeedScheme::design(cfg.master_seed, f, r);
    ds.placement = cfg.placement;
    TrainingSet ts;
    ts.X = maximin_lhs(ds).points;
    ts.y.resize(ts.X.rows());
    for (Eigen::Index i = 0; i < ts.X.rows(); ++i)
      ts.y[i] = tf(row_span(ts.X, i));

    const Kernel base = method.make(tf.d);
    const int n_axes = method.enumerate_axes ? tf.d : 1;
    std::optional<MLResult> best;
    int best_axis = -1;
    std::string last_error;
    for (int axis = 0; axis < n_axes; ++axis) {
      const Kernel k = method.enumerate_axes ? base.with_axis(axis) : base;
      MLProblem prob{k, ts, default_bounds(k, tf.domain, bounds_variance(ts.y)),
                     cfg.n_restarts, res.seed, cfg.max_evals};
      try {
        auto ml = maximize_likelihood(prob);
        if (!best || ml.best_loglik > best->best_loglik) {
          best = std::move(ml);
          best_axis = method.enumerate_axes ? axis : -1;
        }
      } catch (const OptimizationError &e) {
        last_error = e.what();
      }
    }
    if (!best)
      throw Error(last_error);

    const auto gp = FittedGP::fit(best->best_kernel, ts);
    const PointSet Xt = uniform_test_set(cfg.n_test, tf.domain, SeedScheme::test_set(cfg.master_seed, f));
    std::vector<double> truth(Xt.rows());
    std::vector<double> pred(Xt.rows());
    int large = 0;
    for (Eigen::Index i = 0; i < Xt.rows(); ++i) {
      truth[i] = tf(row_span(Xt, i));
      pred[i] = gp.predict(row_span(Xt, i)).mean;
      if (std::abs(truth[i] - pred[i]) > 0.5)
        ++large;
    }
    res.rmse = rmse(truth, pred);
    res.large_error_fraction = static_cast<double>(large) / static_cast<double>(Xt.rows());
    res.jitter = gp.jitter_used();
    res.loglik = best->best_loglik;
    res.axis = best_axis;
    for (std::size_t i = 0; i < best->names.size(); ++i)
      res.params.emplace_back(best->names[i], best->best_params[i]);
    res.ok = std::isfinite(res.rmse);
    res.status = res.ok ? "ok" : "failed: non-finite rmse";
  } catch (const std::exception &e) {
    res.ok = false;
    res.status = csv_safe(std::string("failed: ") + e.what());
  }
  res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  return res;
}

std::vector<ExperimentResult>
run_experiment(const ExperimentConfig &cfg,
               const std::function<void(const ExperimentResult &)> &on_result) {
  cfg.validate();
  const int nf = static_cast<int>(cfg.functions.size());
  const int nm = static_cast<int>(cfg.methods.size());
  const std::size_t total = static_cast<std::size_t>(nf) * cfg.replicates * nm;

  std::vector<std::optional<ExperimentResult>> slots(total);
  std::mutex mu;
  std::size_t committed = 0;
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t cell = next++; cell < total; cell = next++) {
      const int m = static_cast<int>(cell % nm);
      const int r = static_cast<int>((cell / nm) % cfg.replicates);
      const int f = static_cast<int>(cell / (static_cast<std::size_t>(nm) * cfg.replicates));
      auto res = run_cell(cfg, f, r, m);
      std::lock_guard lock(mu);
      slots[cell] = std::move(res);
      // Single writer: emit the completed prefix in cell order.
      while (committed < total && slots[committed]) {
        if (on_result)
          on_result(*slots[committed]);
        ++committed;
      }
    }
  };

  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(total, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }

  std::vector<ExperimentResult> out;
  out.reserve(total);
  for (auto &s : slots)
    out.push_back(std::move(*s));
  return out;
}

double quantile_linear(std::vector<double> values, double p) {
  if (values.empty())
    throw InputError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size())
    return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

std::vector<MethodSummary> summarize(const std::vector<ExperimentResult> &results) {
  if (results.empty())
    throw InputError("nothing to summarize");
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> ok;
  std::map<std::string, int> failed;
  for (const auto &r : results) {
    if (!ok.count(r.method) && !failed.count(r.method))
      order.push_back(r.method);
    if (r.ok)
      ok[r.method].push_back(r.rmse);
    else
      ok[r.method];
    failed[r.method] += r.ok ? 0 : 1;
  }
  std::vector<MethodSummary> out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto &m : order) {
    const auto &v = ok[m];
    MethodSummary s{m, nan, nan, nan, nan, nan, nan, static_cast<int>(v.size()), failed[m]};
    if (!v.empty()) {
      s.min = *std::min_element(v.begin(), v.end());
      s.max = *std::max_element(v.begin(), v.end());
      s.q1 = quantile_linear(v, 0.25);
      s.median = quantile_linear(v, 0.5);
      s.q3 = quantile_linear(v, 0.75);
      double sum = 0.0;
      for (double x : v)
        sum += x;
      s.mean = sum / static_cast<double>(v.size());
    }
    out.push_back(s);
  }
  return out;
}

std::vector<std::string> results_header() {
  return {"function", "dim",     "method", "replicate", "seed",   "rmse",
          "loglik",   "axis",    "n_train", "n_test",   "jitter", "status"};
}

std::vector<std::string> result_cells(const ExperimentResult &r) {
  return {r.function,
          std::to_string(r.dim),
          r.method,
          std::to_string(r.replicate),
          std::to_string(r.seed),
          format_double(r.rmse),
          format_double(r.loglik),
          std::to_string(r.axis),
          std::to_string(r.n_train),
          std::to_string(r.n_test),
          format_double(r.jitter),
          csv_safe(r.status)};
}

std::vector<std::string> summary_header() {
  return {"method", "min", "q1", "median", "q3", "max", "mean", "failures"};
}

std::vector<std::string> summary_cells(const MethodSummary &s) {
  return {s.method,          format_double(s.min), format_double(s.q1),
          format_double(s.median), format_double(s.q3), format_double(s.max),
          format_double(s.mean),   std::to_string(s.failures)};
}

nlohmann::json to_json(const ExperimentResult &r) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto &[name, value] : r.params)
    params[name] = value;
  const auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  return {{"function", r.function}, {"dim", r.dim},         {"method", r.method},
          {"replicate", r.replicate}, {"seed", r.seed},     {"rmse", num(r.rmse)},
          {"loglik", num(r.loglik)}, {"axis", r.axis},      {"jitter", num(r.jitter)},
          {"status", r.status},      {"params", params},
          {"wall_ms", r.wall_ms}};
}

} // namespace discgp

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

#include "discgp/hyperopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "discgp/kernel_config.hpp"

namespace discgp {

namespace {

constexpr int kStartBlock = 10;
constexpr double kBoundTol = 1e-6;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Row-major starts in [0,1)^dim, kStartBlock rows per stratified block.
std::vector<std::vector<double>> unit_starts(int n, int dim, std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  for (int block = 0; static_cast<int>(out.size()) < n; ++block) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(block))));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> rows(kStartBlock, std::vector<double>(dim));
    std::vector<int> perm(kStartBlock);
    for (int c = 0; c < dim; ++c) {
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int r = 0; r < kStartBlock; ++r)
        rows[r][c] = (perm[r] + u(rng)) / kStartBlock;
    }
    for (auto &r : rows) {
      if (static_cast<int>(out.size()) < n)
        out.push_back(std::move(r));
    }
  }
  return out;
}

void append_bounds(const Kernel &k, const Box &domain, double yv, std::vector<ParamBounds> &out) {
  const int d = k.dim();
  const ParamBounds variance{1e-6 * yv, 1e3 * yv};
  switch (k.kind()) {
  case KernelKind::Exponential:
  case KernelKind::Matern32:
  case KernelKind::Matern52:
  case KernelKind::SquaredExp:
    out.push_back(variance);
    for (int i = 0; i < d; ++i)
      out.push_back({1e-2 * domain.width(i), 10.0 * domain.width(i)});
    return;
  case KernelKind::NeuralNet:
  case KernelKind::NeuralNetShifted:
    out.push_back(variance);
    for (int i = 0; i <= d; ++i)
      out.push_back({1e-2, 1e3});
    if (k.kind() == KernelKind::NeuralNetShifted) {
      for (int i = 0; i < d; ++i)
        out.push_back({domain.lower[i], domain.upper[i]});
    }
    return;
  case KernelKind::Gibbs: {
    out.push_back(variance);
    const auto f = *k.lsfn();
    if (LengthScaleFn::uses_c1(f.kind))
      out.push_back({1e-2, 1e3});
    // c2 - limit is the smallest length-scale the function can reach; floor it
    // like a stationary length-scale.
    const double limit = LengthScaleFn::c2_limit(f.kind);
    double width = domain.width(0);
    for (int i = 1; i < d; ++i)
      width = std::max(width, domain.width(i));
    out.push_back({limit + 1e-2 * width, limit + 1e2});
    return;
  }
  case KernelKind::Warped: {
    const auto w = *k.warp();
    if (w.uses_c1())
      out.push_back({1e-2, 1e3});
    std::vector<double> lo;
    std::vector<double> hi;
    for (int i = 0; i < d; ++i) {
      if (i != w.axis) {
        lo.push_back(domain.lower[i]);
        hi.push_back(domain.upper[i]);
      } else if (w.kind == WarpKind::PeriodicPair) {
        lo.insert(lo.end(), {-1.0, -1.0});
        hi.insert(hi.end(), {1.0, 1.0});
      } else {
        const auto [a, b] = sigmoid_range(as_sigmoid(w.kind));
        lo.push_back(a);
        hi.push_back(b);
      }
    }
    append_bounds(k.children()[0], Box(lo, hi), yv, out);
    return;
  }
  case KernelKind::Scaled:
    out.push_back({1e-3, 1e3});
    break;
  case KernelKind::ShiftedConst:
    out.push_back({1e-6 * yv, 1e3 * yv});
    break;
  default:
    break;
  }
  for (const auto &c : k.children())
    append_bounds(c, domain, yv, out);
}

} // namespace

double log_likelihood(const Kernel &kernel, const TrainingSet &ts) {
  return FittedGP::fit(kernel, ts).log_likelihood();
}

double bounds_variance(const Vector &y) {
  if (y.size() == 0)
    return 1.0;
  const double v = (y.array() - y.mean()).square().mean();
  return v > 0.0 ? v : 1.0;
}

std::vector<ParamBounds> default_bounds(const Kernel &kernel, const Box &domain,
                                        double y_variance) {
  if (domain.dim() != kernel.dim())
    throw InputError("domain dimension " + std::to_string(domain.dim()) +
                     " does not match kernel dimension " + std::to_string(kernel.dim()));
  if (!(y_variance > 0.0))
    throw InputError("variance scale for bounds must be positive");
  std::vector<ParamBounds> out;
  append_bounds(kernel, domain, y_variance, out);
  return out;
}

bool MLResult::any_at_bound() const {
  return std::any_of(at_lower.begin(), at_lower.end(), [](bool b) { return b; }) ||
         std::any_of(at_upper.begin(), at_upper.end(), [](bool b) { return b; });
}

std::vector<std::string> MLResult::boundary_warnings() const {
  std::vector<std::string> out;
  const auto params = best_kernel.flat_params();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (at_lower[i])
      out.push_back(names[i] + " = " + std::to_string(best_params[i]) + " at lower bound " +
                    std::to_string(params[i].lower));
    if (at_upper[i])
      out.push_back(names[i] + " = " + std::to_string(best_params[i]) + " at upper bound " +
                    std::to_string(params[i].upper));
  }
  return out;
}

MLResult maximize_likelihood(const MLProblem &prob) {
  if (prob.n_restarts < 1)
    throw InputError("maximize_likelihood needs at least one restart");
  prob.ts.validate();
  const Kernel base = prob.bounds.empty() ? prob.kernel : prob.kernel.with_bounds(prob.bounds);
  const auto params = base.flat_params();
  const auto n = params.size();
  if (n == 0)
    throw InputError("kernel has no free parameters");

  std::vector<double> lo(n);
  std::vector<double> hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = params[i].search_lower();
    hi[i] = params[i].search_upper();
  }
  const auto to_values = [&](std::span<const double> theta) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = std::clamp(params[i].from_search(theta[i]), params[i].lower, params[i].upper);
    return v;
  };
  const std::function<double(std::span<const double>)> objective =
      [&](std::span<const double> theta) {
        try {
          return -log_likelihood(base.with_values(to_values(theta)), prob.ts);
        } catch (const Error &) {
          return std::numeric_limits<double>::infinity();
        }
      };

  NelderMeadOptions opts;
  opts.rel_tol = prob.rel_tol;
  opts.max_evals = prob.max_evals;

  MLResult res{base, {}, {}, -std::numeric_limits<double>::infinity(), -1, {}, {}, {}, {}, {}};
  std::vector<std::vector<double>> thetas;
  std::vector<std::string> diagnostics;
  const auto starts = unit_starts(prob.n_restarts, static_cast<int>(n), prob.seed);
  for (int r = 0; r < prob.n_restarts; ++r) {
    std::vector<double> x0(n);
    for (std::size_t i = 0; i < n; ++i)
      x0[i] = lo[i] + starts[r][i] * (hi[i] - lo[i]);
    const auto nm = nelder_mead_box(objective, x0, lo, hi, opts);
    const double ll = std::isfinite(nm.f) ? -nm.f : -std::numeric_limits<double>::infinity();
    res.restart_logliks.push_back(ll);
    res.converged.push_back(nm.converged && std::isfinite(ll));
    res.evaluations.push_back(nm.evals);
    thetas.push_back(nm.x);
    diagnostics.push_back("restart " + std::to_string(r) + ": loglik " + std::to_string(ll) +
                          ", " + std::to_string(nm.evals) + " evaluations" +
                          (nm.converged ? "" : ", not converged"));
  }

  // Best over converged restarts; fall back to any finite restart.
  for (bool need_converged : {true, false}) {
    for (int r = 0; r < prob.n_restarts; ++r) {
      if (need_converged && !res.converged[r])
        continue;
      if (std::isfinite(res.restart_logliks[r]) && res.restart_logliks[r] > res.best_loglik) {
        res.best_loglik = res.restart_logliks[r];
        res.best_restart = r;
      }
    }
    if (res.best_restart >= 0)
      break;
  }
  if (res.best_restart < 0)
    throw OptimizationError("likelihood maximisation failed in all " +
                                std::to_string(prob.n_restarts) + " restarts",
                            diagnostics);

  const auto &theta = thetas[res.best_restart];
  res.best_params = to_values(theta);
  res.best_kernel = base.with_values(res.best_params);
  for (const auto &p : params)
    res.names.push_back(p.name);
  for (std::size_t i = 0; i < n; ++i) {
    res.at_lower.push_back(std::abs(theta[i] - lo[i]) <= kBoundTol);
    res.at_upper.push_back(std::abs(theta[i] - hi[i]) <= kBoundTol);
  }
  return res;
}

nlohmann::json to_json(const MLResult &r) {
  nlohmann::json params = nlohmann::json::array();
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    params.push_back({{"name", r.names[i]},
                      {"value", r.best_params[i]},
                      {"at_lower", static_cast<bool>(r.at_lower[i])},
                      {"at_upper", static_cast<bool>(r.at_upper[i])}});
  }
  nlohmann::json restarts = nlohmann::json::array();
  for (std::size_t i = 0; i < r.restart_logliks.size(); ++i) {
    const double ll = r.restart_logliks[i];
    restarts.push_back({{"index", i},
                        {"loglik", std::isfinite(ll) ? nlohmann::json(ll) : nlohmann::json()},
                        {"converged", static_cast<bool>(r.converged[i])},
                        {"evaluations", r.evaluations[i]}});
  }
  return {{"best_loglik", r.best_loglik}, {"best_restart", r.best_restart},
          {"params", params},            {"restarts", restarts},
          {"kernel", to_json(r.best_kernel)}};
}

} // namespace discgp

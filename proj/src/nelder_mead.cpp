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

#include "discgp/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "discgp/types.hpp"

namespace discgp {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

struct Simplex {
  std::vector<std::vector<double>> pts;
  std::vector<double> vals;
};

class BoxedObjective {
public:
  BoxedObjective(const std::function<double(std::span<const double>)> &f,
                 std::span<const double> lo, std::span<const double> hi, int budget)
      : f_(f), lo_(lo), hi_(hi), budget_(budget) {}

  void project(std::vector<double> &x) const {
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = std::clamp(x[i], lo_[i], hi_[i]);
  }

  double operator()(std::vector<double> &x) {
    project(x);
    ++evals_;
    const double v = f_(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }

  bool exhausted() const { return evals_ >= budget_; }
  int evals() const { return evals_; }

private:
  const std::function<double(std::span<const double>)> &f_;
  std::span<const double> lo_;
  std::span<const double> hi_;
  int budget_;
  int evals_ = 0;
};

Simplex initial_simplex(BoxedObjective &obj, const std::vector<double> &x0,
                        std::span<const double> lo, std::span<const double> hi, double step) {
  const std::size_t n = x0.size();
  Simplex s;
  s.pts.push_back(x0);
  s.vals.push_back(obj(s.pts.back()));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p = x0;
    const double h = step * (hi[i] - lo[i]);
    p[i] = (p[i] + h <= hi[i]) ? p[i] + h : p[i] - h;
    s.vals.push_back(obj(p));
    s.pts.push_back(std::move(p));
  }
  return s;
}

void sort_simplex(Simplex &s) {
  std::vector<std::size_t> order(s.pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.vals[a] < s.vals[b]; });
  Simplex sorted;
  for (auto i : order) {
    sorted.pts.push_back(std::move(s.pts[i]));
    sorted.vals.push_back(s.vals[i]);
  }
  s = std::move(sorted);
}

bool has_converged(const Simplex &s, std::span<const double> lo, std::span<const double> hi,
                   double tol) {
  const double best = s.vals.front();
  const double worst = s.vals.back();
  if (!std::isfinite(worst) || worst - best > tol * (std::abs(best) + tol))
    return false;
  for (std::size_t v = 1; v < s.pts.size(); ++v) {
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (std::abs(s.pts[v][i] - s.pts[0][i]) > tol * (hi[i] - lo[i]))
        return false;
    }
  }
  return true;
}

// One Nelder-Mead descent from an initial simplex; returns true on convergence.
bool descend(BoxedObjective &obj, Simplex &s, std::span<const double> lo,
             std::span<const double> hi, double tol) {
  const std::size_t n = lo.size();
  std::vector<double> centroid(n);
  const auto along = [&](double t) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i)
      p[i] = centroid[i] + t * (s.pts[n][i] - centroid[i]);
    return p;
  };
  while (true) {
    sort_simplex(s);
    if (has_converged(s, lo, hi, tol))
      return true;
    if (obj.exhausted())
      return false;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < n; ++i)
        centroid[i] += s.pts[v][i] / static_cast<double>(n);

    auto xr = along(-kReflect);
    const double fr = obj(xr);
    if (fr < s.vals[0]) {
      auto xe = along(-kReflect * kExpand);
      const double fe = obj(xe);
      if (fe < fr) {
        s.pts[n] = std::move(xe);
        s.vals[n] = fe;
      } else {
        s.pts[n] = std::move(xr);
        s.vals[n] = fr;
      }
      continue;
    }
    if (fr < s.vals[n - 1]) {
      s.pts[n] = std::move(xr);
      s.vals[n] = fr;
      continue;
    }
    const bool outside = fr < s.vals[n];
    auto xc = along(outside ? -kReflect * kContract : kContract);
    const double fc = obj(xc);
    if (fc < (outside ? fr : s.vals[n])) {
      s.pts[n] = std::move(xc);
      s.vals[n] = fc;
      continue;
    }
    for (std::size_t v = 1; v <= n; ++v) {
      for (std::size_t i = 0; i < n; ++i)
        s.pts[v][i] = s.pts[0][i] + kShrink * (s.pts[v][i] - s.pts[0][i]);
      s.vals[v] = obj(s.pts[v]);
    }
  }
}

} // namespace

NelderMeadResult nelder_mead_box(const std::function<double(std::span<const double>)> &f,
                                 std::vector<double> x0, std::span<const double> lower,
                                 std::span<const double> upper, const NelderMeadOptions &opts) {
  const std::size_t n = x0.size();
  if (n == 0 || lower.size() != n || upper.size() != n)
    throw InputError("Nelder-Mead: start and bounds must have the same positive length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lower[i] <= upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw InputError("Nelder-Mead: bounds must be finite with lower <= upper");
  }
  BoxedObjective obj(f, lower, upper, opts.max_evals);
  obj.project(x0);
  Simplex s = initial_simplex(obj, x0, lower, upper, opts.initial_step);
  bool converged = descend(obj, s, lower, upper, opts.rel_tol);

  if (converged && opts.polish && !obj.exhausted()) {
    const double before = s.vals.front();
    Simplex again = initial_simplex(obj, s.pts.front(), lower, upper, opts.initial_step);
    descend(obj, again, lower, upper, opts.rel_tol);
    if (again.vals.front() <= before)
      s = std::move(again);
  }
  sort_simplex(s);
  std::vector<double> best = s.pts.front();
  double fbest = s.vals.front();

  // Active-set snap: coordinates that ended near a bound are tried on it.
  if (opts.snap_distance > 0.0) {
    for (std::size_t i = 0; i < n && !obj.exhausted(); ++i) {
      const double w = upper[i] - lower[i];
      for (double bound : {lower[i], upper[i]}) {
        if (best[i] == bound || std::abs(best[i] - bound) > opts.snap_distance * w)
          continue;
        std::vector<double> trial = best;
        trial[i] = bound;
        const double ft = obj(trial);
        if (ft <= fbest) {
          best = std::move(trial);
          fbest = ft;
        }
      }
    }
  }
  return NelderMeadResult{best, fbest, obj.evals(), converged};
}

} // namespace discgp

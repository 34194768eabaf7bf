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

#include "discgp/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace discgp {

namespace {

using UnitPoints = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double squared_distance(const UnitPoints &U, Eigen::Index i, Eigen::Index j) {
  return (U.row(i) - U.row(j)).squaredNorm();
}

// Full pairwise squared-distance matrix; swaps update one row/column pair.
Eigen::MatrixXd distance_matrix(const UnitPoints &U) {
  const Eigen::Index n = U.rows();
  Eigen::MatrixXd D = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      D(i, j) = D(j, i) = squared_distance(U, i, j);
  return D;
}

UnitPoints initial_unit_lhs(const DesignSpec &spec, std::mt19937_64 &rng) {
  UnitPoints U(spec.n, spec.d);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> perm(spec.n);
  for (int c = 0; c < spec.d; ++c) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int r = 0; r < spec.n; ++r) {
      const double offset = spec.placement == StratumPlacement::Center ? 0.5 : unif(rng);
      U(r, c) = (perm[r] + offset) / spec.n;
    }
  }
  return U;
}

PointSet to_domain(const UnitPoints &U, const Box &box) {
  PointSet X(U.rows(), U.cols());
  for (Eigen::Index c = 0; c < U.cols(); ++c)
    X.col(c) = box.lower[c] + U.col(c).array() * box.width(static_cast<int>(c));
  return X;
}

} // namespace

void DesignSpec::validate() const {
  if (n < 2)
    throw InputError("design needs n >= 2, got " + std::to_string(n));
  if (d < 1)
    throw InputError("design needs d >= 1, got " + std::to_string(d));
  if (domain.dim() != d)
    throw InputError("design domain has dimension " + std::to_string(domain.dim()) +
                     ", expected " + std::to_string(d));
  if (optimize_iters < 0 || swaps_per_temperature < 0)
    throw InputError("design optimisation counts must be non-negative");
  if (!(cooling > 0.0 && cooling < 1.0))
    throw InputError("cooling factor must lie in (0, 1)");
}

Design random_lhs(const DesignSpec &spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const UnitPoints U = initial_unit_lhs(spec, rng);
  Design out{to_domain(U, spec.domain), 0.0, 0.0, spec.seed};
  out.min_dist = out.initial_min_dist = std::sqrt(distance_matrix(U).minCoeff());
  return out;
}

Design maximin_lhs(const DesignSpec &spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  UnitPoints U = initial_unit_lhs(spec, rng);
  Eigen::MatrixXd D = distance_matrix(U);
  double current = D.minCoeff();
  const double initial = current;
  double best = current;
  UnitPoints best_U = U;

  std::uniform_int_distribution<int> pick_col(0, spec.d - 1);
  std::uniform_int_distribution<int> pick_row(0, spec.n - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double temperature = spec.initial_temperature * std::sqrt(initial);
  Eigen::VectorXd row_i(spec.n);
  Eigen::VectorXd row_j(spec.n);

  for (int step = 0; step < spec.optimize_iters; ++step) {
    for (int s = 0; s < spec.swaps_per_temperature; ++s) {
      const int c = pick_col(rng);
      const int i = pick_row(rng);
      int j = pick_row(rng);
      if (i == j)
        j = (j + 1) % spec.n;
      std::swap(U(i, c), U(j, c));
      for (int k = 0; k < spec.n; ++k) {
        row_i[k] = k == i ? D(i, i) : squared_distance(U, i, k);
        row_j[k] = k == j ? D(j, j) : squared_distance(U, j, k);
      }
      row_i[j] = row_j[i] = squared_distance(U, i, j);
      // Recompute the minimum with rows/columns i and j replaced.
      double candidate = std::min(row_i.minCoeff(), row_j.minCoeff());
      for (int a = 0; a < spec.n; ++a) {
        if (a == i || a == j)
          continue;
        for (int b = a + 1; b < spec.n; ++b) {
          if (b == i || b == j)
            continue;
          candidate = std::min(candidate, D(a, b));
        }
      }
      const double delta = std::sqrt(candidate) - std::sqrt(current);
      const bool accept =
          delta >= 0.0 || (temperature > 0.0 && unif(rng) < std::exp(delta / temperature));
      if (accept) {
        D.row(i) = row_i.transpose();
        D.col(i) = row_i;
        D.row(j) = row_j.transpose();
        D.col(j) = row_j;
        current = candidate;
        if (current > best) {
          best = current;
          best_U = U;
        }
      } else {
        std::swap(U(i, c), U(j, c));
      }
    }
    temperature *= spec.cooling;
  }
  return Design{to_domain(best_U, spec.domain), std::sqrt(best), std::sqrt(initial), spec.seed};
}

PointSet uniform_test_set(int n_t, const Box &domain, std::uint64_t seed) {
  if (n_t < 1)
    throw InputError("test set size must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  PointSet X(n_t, domain.dim());
  for (int r = 0; r < n_t; ++r)
    for (int c = 0; c < domain.dim(); ++c)
      X(r, c) = domain.lower[c] + unif(rng) * domain.width(c);
  return X;
}

double min_pairwise_distance(const PointSet &points, const Box &domain) {
  UnitPoints U(points.rows(), points.cols());
  for (Eigen::Index c = 0; c < points.cols(); ++c)
    U.col(c) = (points.col(c).array() - domain.lower[c]) / domain.width(static_cast<int>(c));
  return std::sqrt(distance_matrix(U).minCoeff());
}

Eigen::MatrixXi strata(const PointSet &points, const Box &domain) {
  const auto n = points.rows();
  Eigen::MatrixXi S(n, points.cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      const double u = (points(r, c) - domain.lower[c]) / domain.width(static_cast<int>(c));
      S(r, c) = std::clamp(static_cast<int>(std::floor(u * static_cast<double>(n))), 0,
                           static_cast<int>(n) - 1);
    }
  }
  return S;
}

} // namespace discgp

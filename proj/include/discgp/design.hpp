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
#include <string>

#include "discgp/types.hpp"

namespace discgp {

/// Where a point sits inside its Latin-hypercube stratum.
enum class StratumPlacement {
  Center,
  Random,
};

struct DesignSpec {
  int n = 0;
  int d = 0;
  Box domain;
  std::uint64_t seed = 0;
  /// Annealing temperature steps.
  int optimize_iters = 100;
  int swaps_per_temperature = 50;
  double cooling = 0.95;
  /// Initial temperature as a fraction of the starting minimum distance.
  double initial_temperature = 0.1;
  StratumPlacement placement = StratumPlacement::Center;

  void validate() const;
};

struct Design {
  PointSet points;
  /// Minimum pairwise Euclidean distance in domain-normalised coordinates.
  double min_dist = 0.0;
  /// min_dist of the random Latin hypercube the optimisation started from.
  double initial_min_dist = 0.0;
  std::uint64_t seed = 0;
};

/// Latin hypercube whose minimum pairwise distance is improved by simulated
/// annealing over within-column swaps. Returns the best design visited.
Design maximin_lhs(const DesignSpec &spec);

/// Unoptimised random Latin hypercube (the annealing starting point).
Design random_lhs(const DesignSpec &spec);

/// i.i.d. uniform points in the box.
PointSet uniform_test_set(int n_t, const Box &domain, std::uint64_t seed);

/// Minimum pairwise Euclidean distance after mapping the box to [0,1]^d.
double min_pairwise_distance(const PointSet &points, const Box &domain);

/// Stratum index in [0, n) of every coordinate, in normalised units.
Eigen::MatrixXi strata(const PointSet &points, const Box &domain);

} // namespace discgp

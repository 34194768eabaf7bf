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

#include <functional>
#include <span>
#include <vector>

namespace discgp {

struct NelderMeadOptions {
  /// Stop when the simplex's value spread is within rel_tol * (|f_best| + rel_tol)
  /// and every vertex is within rel_tol * (box width) of the best one.
  double rel_tol = 1e-8;
  int max_evals = 2000;
  /// Initial simplex edge as a fraction of each box width.
  double initial_step = 0.1;
  /// Re-seed the simplex around the optimum once after convergence.
  bool polish = true;
  /// After the descent, coordinates within snap_distance * (box width) of a
  /// bound are moved onto it when that does not increase f.
  double snap_distance = 1e-3;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evals = 0;
  bool converged = false;
};

/// Derivative-free minimisation of f over the box [lower, upper]. Trial
/// points are projected onto the box, so f is never called outside it.
/// Non-finite values of f are treated as +inf.
NelderMeadResult nelder_mead_box(const std::function<double(std::span<const double>)> &f,
                                 std::vector<double> x0, std::span<const double> lower,
                                 std::span<const double> upper,
                                 const NelderMeadOptions &opts = {});

} // namespace discgp

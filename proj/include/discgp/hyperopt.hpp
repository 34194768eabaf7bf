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
#include <vector>

#include <json.hpp>

#include "discgp/gp_model.hpp"
#include "discgp/kernel.hpp"
#include "discgp/nelder_mead.hpp"

namespace discgp {

/// Concentrated log-likelihood of the constant-mean GP:
///   -(n/2) ln(2 pi) - (1/2) ln|K| - (1/2) (y - mu 1)' K^-1 (y - mu 1)
/// with mu replaced by its generalised least-squares estimate and K
/// stabilised by the default jitter policy.
double log_likelihood(const Kernel &kernel, const TrainingSet &ts);

struct MLProblem {
  Kernel kernel;
  TrainingSet ts;
  /// Overrides the kernel's own bounds when non-empty (flattened order).
  std::vector<ParamBounds> bounds;
  int n_restarts = 10;
  std::uint64_t seed = 0;
  int max_evals = 2000;
  double rel_tol = 1e-8;
};

struct MLResult {
  Kernel best_kernel;
  std::vector<std::string> names;
  std::vector<double> best_params;
  double best_loglik = 0.0;
  int best_restart = -1;
  std::vector<double> restart_logliks;
  std::vector<bool> converged;
  std::vector<int> evaluations;
  /// Best parameter within 1e-6 (search units) of its lower / upper bound.
  std::vector<bool> at_lower;
  std::vector<bool> at_upper;

  bool any_at_bound() const;
  /// Human-readable notes for every parameter sitting on a bound.
  std::vector<std::string> boundary_warnings() const;
};

class OptimizationError : public Error {
public:
  OptimizationError(const std::string &what, std::vector<std::string> diagnostics)
      : Error(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string> &diagnostics() const { return diagnostics_; }

private:
  std::vector<std::string> diagnostics_;
};

/// Multi-start bounded maximisation of log_likelihood. Restart r starts from
/// row r mod 10 of the (r / 10)-th Latin-hypercube block over the search box,
/// so the first k starts do not depend on n_restarts. Deterministic in seed;
/// ties go to the lowest restart index.
MLResult maximize_likelihood(const MLProblem &prob);

/// Fitting bounds derived from the input domain and the sample variance of y.
///
///   variance           [1e-6, 1e3] * var(y)
///   length_i           [1e-2, 10] * width_i
///   NN sigma_j         [1e-2, 1e3]
///   NN tau_j           [domain lower_j, domain upper_j]
///   Gibbs / warp c1    [1e-2, 1e3]
///   Gibbs c2           [limit + 1e-2 * max width, limit + 1e2]
///   Scaled c           [1e-3, 1e3]
///   ShiftedConst c     [1e-6, 1e3] * var(y)
///
/// Warped children see the warp's image of the domain: the sigmoid's range on
/// the warped axis, [-1, 1] for both periodic coordinates.
std::vector<ParamBounds> default_bounds(const Kernel &kernel, const Box &domain, double y_variance);

/// Sample variance of y (population form); 1 when y is constant.
double bounds_variance(const Vector &y);

nlohmann::json to_json(const MLResult &r);

} // namespace discgp

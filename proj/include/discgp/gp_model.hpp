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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <json.hpp>

#include "discgp/kernel.hpp"

namespace discgp {

/// Design matrix (one point per row) with its observations.
struct TrainingSet {
  PointSet X;
  Vector y;

  int size() const { return static_cast<int>(X.rows()); }
  int dim() const { return static_cast<int>(X.cols()); }
  /// n >= 2, matching sizes, finite entries.
  void validate() const;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Diagonal stabilisation for Gram factorisation: start at
/// initial_relative * mean(diag K) and multiply by `factor` on each failed
/// attempt, at most `max_escalations` times.
struct JitterPolicy {
  double initial_relative = 1e-10;
  double factor = 10.0;
  int max_escalations = 6;
};

struct JitteredCholesky {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};

/// Factorises K + jitter * I. Throws NumericalError when the last escalation
/// still fails.
JitteredCholesky factorize_with_jitter(const Eigen::MatrixXd &K, const JitterPolicy &policy = {});

/// Constant-mean estimate 1'K^-1 y / 1'K^-1 1.
double estimate_mu(const Kernel &kernel, const TrainingSet &ts, const JitterPolicy &policy = {});

/// Throws InputError if two rows are within 1e-12 of the bounding-box diagonal.
void check_duplicates(const PointSet &X);

/// Conditioned constant-mean GP. Immutable; predictions are thread-safe.
class FittedGP {
public:
  /// Factors the Gram matrix under the jitter policy and precomputes
  /// alpha = K^-1 (y - mu 1). Hyperparameters are used as given.
  static FittedGP fit(Kernel kernel, TrainingSet ts, const JitterPolicy &policy = {});

  /// Rebuilds the factorisation at a known jitter and mean, as stored by
  /// to_json(). Throws NumericalError if K + jitter I is not factorisable.
  static FittedGP restore(Kernel kernel, TrainingSet ts, double mu_hat, double jitter_used);

  Prediction predict(std::span<const double> x) const;
  std::vector<Prediction> predict_batch(const PointSet &Xt) const;
  /// s^2(x) before clamping at zero.
  double raw_variance(std::span<const double> x) const;

  const Kernel &kernel() const { return kernel_; }
  const TrainingSet &training() const { return ts_; }
  double mu_hat() const { return mu_hat_; }
  double jitter_used() const { return jitter_; }
  /// Lower-triangular L with L L' = K + jitter I.
  Eigen::MatrixXd chol() const { return llt_.matrixL(); }
  const Vector &alpha() const { return alpha_; }
  /// Concentrated log-likelihood at the fitted parameters.
  double log_likelihood() const { return loglik_; }

private:
  FittedGP(Kernel kernel, TrainingSet ts) : kernel_(std::move(kernel)), ts_(std::move(ts)) {}
  void finish(JitteredCholesky factor, std::optional<double> mu);
  std::pair<double, double> mean_and_raw_variance(std::span<const double> x) const;

  Kernel kernel_;
  TrainingSet ts_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
  double mu_hat_ = 0.0;
  Vector alpha_;
  Vector ones_solved_; // L^-1 1
  double ones_quad_ = 0.0; // 1' K^-1 1
  double loglik_ = 0.0;
};

inline FittedGP fit(const Kernel &kernel, const TrainingSet &ts) {
  return FittedGP::fit(kernel, ts);
}

nlohmann::json to_json(const FittedGP &gp);
FittedGP fitted_gp_from_json(const nlohmann::json &j);

/// Receives numerical warnings such as clamped negative variances. The default
/// handler writes to std::clog.
void set_warning_handler(std::function<void(const std::string &)> handler);
void warn(const std::string &message);

} // namespace discgp

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

#include "discgp/gp_model.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>

#include "discgp/kernel_config.hpp"

namespace discgp {

namespace {

constexpr double kNegativeVarianceWarn = -1e-10;
constexpr double kDuplicateRelative = 1e-12;

std::mutex &warn_mutex() {
  static std::mutex m;
  return m;
}

std::function<void(const std::string &)> &warn_handler() {
  static std::function<void(const std::string &)> h = [](const std::string &msg) {
    std::clog << "warning: " << msg << '\n';
  };
  return h;
}

} // namespace

void set_warning_handler(std::function<void(const std::string &)> handler) {
  std::lock_guard lock(warn_mutex());
  warn_handler() = std::move(handler);
}

void warn(const std::string &message) {
  std::lock_guard lock(warn_mutex());
  if (warn_handler())
    warn_handler()(message);
}

void TrainingSet::validate() const {
  if (X.rows() < 2)
    throw InputError("training set needs at least 2 points, got " + std::to_string(X.rows()));
  if (X.cols() < 1)
    throw InputError("training set has no input columns");
  if (y.size() != X.rows())
    throw InputError("training set has " + std::to_string(X.rows()) + " points but " +
                     std::to_string(y.size()) + " observations");
  if (!X.allFinite() || !y.allFinite())
    throw InputError("training set contains non-finite values");
}

void check_duplicates(const PointSet &X) {
  const Eigen::RowVectorXd span = X.colwise().maxCoeff() - X.colwise().minCoeff();
  const double threshold = kDuplicateRelative * span.norm();
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < X.rows(); ++j) {
      if ((X.row(i) - X.row(j)).norm() <= threshold)
        throw InputError("training points " + std::to_string(i) + " and " + std::to_string(j) +
                         " are duplicates");
    }
  }
}

JitteredCholesky factorize_with_jitter(const Eigen::MatrixXd &K, const JitterPolicy &policy) {
  const Eigen::Index n = K.rows();
  const double mean_diag = K.diagonal().mean();
  if (!K.allFinite() || !(mean_diag > 0.0))
    throw NumericalError("covariance matrix is not finite with positive diagonal");
  double jitter = policy.initial_relative * mean_diag;
  for (int attempt = 0; attempt <= policy.max_escalations; ++attempt) {
    Eigen::MatrixXd A = K;
    A.diagonal().array() += jitter;
    JitteredCholesky out{Eigen::LLT<Eigen::MatrixXd>(A), jitter};
    if (out.llt.info() == Eigen::Success) {
      // LLT flags only non-positive pivots; reject factors that lost finiteness.
      const auto diag = out.llt.matrixLLT().diagonal();
      if (diag.allFinite() && (diag.array() > 0.0).all())
        return out;
    }
    jitter *= policy.factor;
  }
  throw NumericalError("Cholesky factorisation of the " + std::to_string(n) + "x" +
                       std::to_string(n) + " covariance matrix failed at jitter " +
                       std::to_string(jitter / policy.factor));
}

double estimate_mu(const Kernel &kernel, const TrainingSet &ts, const JitterPolicy &policy) {
  ts.validate();
  const auto factor = factorize_with_jitter(gram_matrix(kernel, ts.X), policy);
  const Vector ones = Vector::Ones(ts.size());
  const Vector kinv_ones = factor.llt.solve(ones);
  return kinv_ones.dot(ts.y) / kinv_ones.dot(ones);
}

FittedGP FittedGP::fit(Kernel kernel, TrainingSet ts, const JitterPolicy &policy) {
  ts.validate();
  if (ts.dim() != kernel.dim())
    throw InputError("training inputs have dimension " + std::to_string(ts.dim()) +
                     " but the kernel expects " + std::to_string(kernel.dim()));
  check_duplicates(ts.X);
  FittedGP gp(std::move(kernel), std::move(ts));
  gp.finish(factorize_with_jitter(gram_matrix(gp.kernel_, gp.ts_.X), policy), std::nullopt);
  return gp;
}

FittedGP FittedGP::restore(Kernel kernel, TrainingSet ts, double mu_hat, double jitter_used) {
  ts.validate();
  if (ts.dim() != kernel.dim())
    throw InputError("stored training inputs do not match the kernel dimension");
  FittedGP gp(std::move(kernel), std::move(ts));
  Eigen::MatrixXd A = gram_matrix(gp.kernel_, gp.ts_.X);
  A.diagonal().array() += jitter_used;
  JitteredCholesky factor{Eigen::LLT<Eigen::MatrixXd>(A), jitter_used};
  if (factor.llt.info() != Eigen::Success)
    throw NumericalError("stored model: K + jitter I is not positive definite");
  gp.finish(std::move(factor), mu_hat);
  return gp;
}

void FittedGP::finish(JitteredCholesky factor, std::optional<double> mu) {
  llt_ = std::move(factor.llt);
  jitter_ = factor.jitter;
  const Eigen::Index n = ts_.X.rows();
  const auto L = llt_.matrixL();
  ones_solved_ = L.solve(Vector::Ones(n));
  ones_quad_ = ones_solved_.squaredNorm();
  const Vector y_solved = L.solve(ts_.y);
  mu_hat_ = mu ? *mu : ones_solved_.dot(y_solved) / ones_quad_;
  const Vector r_solved = y_solved - mu_hat_ * ones_solved_;
  alpha_ = llt_.matrixU().solve(r_solved);

  const double log_det = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
  loglik_ = -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi) - 0.5 * log_det -
            0.5 * r_solved.squaredNorm();
}

std::pair<double, double> FittedGP::mean_and_raw_variance(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != kernel_.dim())
    throw InputError("prediction point has dimension " + std::to_string(x.size()) +
                     ", model expects " + std::to_string(kernel_.dim()));
  const Vector k = cross_covariance(kernel_, ts_.X, x);
  const Vector v = llt_.matrixL().solve(k);
  const double correction = 1.0 - ones_solved_.dot(v);
  const double raw = kernel_(x, x) - v.squaredNorm() + correction * correction / ones_quad_;
  return {mu_hat_ + k.dot(alpha_), raw};
}

double FittedGP::raw_variance(std::span<const double> x) const {
  return mean_and_raw_variance(x).second;
}

Prediction FittedGP::predict(std::span<const double> x) const {
  const auto [mean, raw] = mean_and_raw_variance(x);
  if (raw < kNegativeVarianceWarn)
    warn("posterior variance " + std::to_string(raw) + " clamped to zero");
  return Prediction{mean, std::max(raw, 0.0)};
}

std::vector<Prediction> FittedGP::predict_batch(const PointSet &Xt) const {
  if (Xt.rows() > 0 && Xt.cols() != kernel_.dim())
    throw InputError("prediction points have dimension " + std::to_string(Xt.cols()) +
                     ", model expects " + std::to_string(kernel_.dim()));
  std::vector<Prediction> out;
  out.reserve(Xt.rows());
  for (Eigen::Index i = 0; i < Xt.rows(); ++i)
    out.push_back(predict(row_span(Xt, i)));
  return out;
}

nlohmann::json to_json(const FittedGP &gp) {
  nlohmann::json X = nlohmann::json::array();
  const auto &ts = gp.training();
  for (Eigen::Index i = 0; i < ts.X.rows(); ++i) {
    const auto r = row_span(ts.X, i);
    X.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"kernel", to_json(gp.kernel())},
          {"mu_hat", gp.mu_hat()},
          {"jitter_used", gp.jitter_used()},
          {"log_likelihood", gp.log_likelihood()},
          {"training", {{"X", X}, {"y", std::vector<double>(ts.y.begin(), ts.y.end())}}}};
}

FittedGP fitted_gp_from_json(const nlohmann::json &j) {
  try {
    Kernel kernel = kernel_from_json(j.at("kernel"));
    const auto rows = j.at("training").at("X").get<std::vector<std::vector<double>>>();
    const auto ys = j.at("training").at("y").get<std::vector<double>>();
    if (rows.empty())
      throw InputError("stored model has no training points");
    TrainingSet ts;
    ts.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size())
        throw InputError("stored model has ragged training rows");
      for (std::size_t c = 0; c < rows[i].size(); ++c)
        ts.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
    ts.y = Eigen::Map<const Vector>(ys.data(), static_cast<Eigen::Index>(ys.size()));
    return FittedGP::restore(std::move(kernel), std::move(ts), j.at("mu_hat").get<double>(),
                             j.at("jitter_used").get<double>());
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("stored model: ") + e.what());
  }
}

} // namespace discgp

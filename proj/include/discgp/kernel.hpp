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

#include "discgp/hyper_param.hpp"
#include "discgp/length_scale.hpp"
#include "discgp/types.hpp"
#include "discgp/warp.hpp"

namespace discgp {

enum class KernelKind {
  Exponential,
  Matern32,
  Matern52,
  SquaredExp,
  NeuralNet,
  NeuralNetShifted,
  Gibbs,
  Warped,
  Sum,
  Product,
  Scaled,
  ShiftedConst,
  OuterFn,
};

/// g in the composition g(x) k(x, x') g(x'). Must be deterministic.
using OuterFunction = std::function<double(std::span<const double>)>;

/// Bounds for one flattened hyperparameter, in natural (not search) units.
struct ParamBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Immutable covariance function.
///
/// A kernel owns its hyperparameters and, for the composition kinds, its
/// child kernels. Every kernel exposes a flattened, depth-first view of all
/// hyperparameters it depends on (own parameters first, then children in
/// order), which is what likelihood optimisation operates on.
///
/// Parameter layout per kind:
///   stationary kinds    variance, length0 .. length{d-1}
///   NeuralNet           variance, sigma0 .. sigma{d}        (Sigma = diag(sigma_j^2))
///   NeuralNetShifted    variance, sigma0 .. sigma{d}, tau0 .. tau{d-1}
///   Gibbs               variance, [c1], c2                   (c1 absent for Constant)
///   Warped              [warp_c1], then the child's parameters
///   Scaled, ShiftedConst  c, then the child's parameters
///   Sum, Product, OuterFn children's parameters only
class Kernel {
public:
  static constexpr int kMaxDim = 63;

  static Kernel stationary(KernelKind kind, double variance, std::vector<double> lengths);
  static Kernel exponential(int dim, double variance = 1.0, double length = 1.0);
  static Kernel matern32(int dim, double variance = 1.0, double length = 1.0);
  static Kernel matern52(int dim, double variance = 1.0, double length = 1.0);
  static Kernel squared_exp(int dim, double variance = 1.0, double length = 1.0);

  /// `sigmas` holds sigma_0 (bias) followed by one entry per input axis.
  static Kernel neural_net(double variance, std::vector<double> sigmas);
  static Kernel neural_net(int dim, double variance = 1.0, double sigma = 1.0);
  /// Inputs enter as x - tau, one shift per axis.
  static Kernel neural_net_shifted(double variance, std::vector<double> sigmas,
                                   std::vector<double> taus);

  static Kernel gibbs(int dim, double variance, LengthScaleFn lsfn);
  /// Input dimension is inferred from the child and the warp kind.
  static Kernel warped(WarpMap warp, Kernel child);

  static Kernel sum(Kernel a, Kernel b);
  static Kernel product(Kernel a, Kernel b);
  static Kernel scaled(double c, Kernel k);
  static Kernel shifted_const(Kernel k, double c);
  static Kernel outer(std::string name, OuterFunction g, Kernel k);

  /// General constructor used by the factories and by config loading.
  Kernel(KernelKind kind, int dim, std::vector<HyperParam> params, std::vector<Kernel> children,
         std::optional<LengthScaleFn> lsfn = std::nullopt,
         std::optional<WarpMap> warp = std::nullopt, std::string outer_name = {},
         OuterFunction outer = {});

  /// k(x, x'). Throws InputError on dimension mismatch.
  double operator()(std::span<const double> x, std::span<const double> xp) const;

  KernelKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<HyperParam> &params() const { return params_; }
  const std::vector<Kernel> &children() const { return children_; }
  /// Length-scale function with c1/c2 filled from the current parameters.
  std::optional<LengthScaleFn> lsfn() const;
  /// Warp with c1 filled from the current parameters.
  std::optional<WarpMap> warp() const;
  const std::string &outer_name() const { return outer_name_; }
  const OuterFunction &outer_function() const { return outer_; }

  /// Depends on x - x' only.
  bool is_stationary() const;

  std::size_t num_params() const;
  /// Depth-first flattened parameters; child names carry a "k<i>." prefix.
  std::vector<HyperParam> flat_params() const;
  std::vector<double> flat_values() const;

  /// Copy with flattened values replaced. Throws ParameterError if any value
  /// falls outside its bounds.
  Kernel with_values(std::span<const double> values) const;
  /// Copy with flattened bounds replaced; values are clamped into the new box.
  Kernel with_bounds(std::span<const ParamBounds> bounds) const;

  /// Returns the kernel with `axis` substituted into its length-scale function
  /// or warp (recursively). Kinds without an axis are returned unchanged.
  Kernel with_axis(int axis) const;

private:
  template <class F> Kernel map_flat(F &&f) const;
  void check_structure() const;
  void refresh_cache();

  double eval_stationary(std::span<const double> x, std::span<const double> xp) const;
  double eval_nn(std::span<const double> x, std::span<const double> xp) const;
  double eval_gibbs(std::span<const double> x, std::span<const double> xp) const;
  double eval_warped(std::span<const double> x, std::span<const double> xp) const;

  KernelKind kind_;
  int dim_;
  std::vector<HyperParam> params_;
  std::vector<Kernel> children_;
  std::optional<LengthScaleFn> lsfn_;
  std::optional<WarpMap> warp_;
  std::string outer_name_;
  OuterFunction outer_;
  std::vector<double> values_; // params_[i].value, cached for evaluation
};

/// K_ij = k(x_i, x_j); the upper triangle is computed and mirrored.
Eigen::MatrixXd gram_matrix(const Kernel &k, const PointSet &X);
/// (k(x, X_0), ..., k(x, X_{n-1})).
Vector cross_covariance(const Kernel &k, const PointSet &X, std::span<const double> x);

inline std::span<const double> row_span(const PointSet &X, Eigen::Index i) {
  return {X.data() + i * X.cols(), static_cast<std::size_t>(X.cols())};
}

const char *to_string(KernelKind k);
KernelKind kernel_kind_from_string(const std::string &s);

} // namespace discgp

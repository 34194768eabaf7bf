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

#include "discgp/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace discgp {

namespace {

// Broad construction-time bounds; default_bounds() narrows them for fitting.
constexpr double kPosLower = 1e-12;
constexpr double kPosUpper = 1e12;
constexpr double kShiftBound = 1e6;
constexpr double kArcsinClamp = 1.0 - 1e-15;

HyperParam positive(std::string name, double value) {
  if (!(value > 0.0))
    throw ParameterError("parameter '" + name + "' must be positive, got " +
                         std::to_string(value));
  return log_param(std::move(name), value, std::min(kPosLower, value),
                   std::max(kPosUpper, value));
}

bool is_table_kind(KernelKind k) {
  return k == KernelKind::Exponential || k == KernelKind::Matern32 ||
         k == KernelKind::Matern52 || k == KernelKind::SquaredExp;
}

std::string indexed(const char *stem, std::size_t i) { return stem + std::to_string(i); }

} // namespace

Kernel::Kernel(KernelKind kind, int dim, std::vector<HyperParam> params,
               std::vector<Kernel> children, std::optional<LengthScaleFn> lsfn,
               std::optional<WarpMap> warp, std::string outer_name, OuterFunction outer)
    : kind_(kind), dim_(dim), params_(std::move(params)), children_(std::move(children)),
      lsfn_(std::move(lsfn)), warp_(std::move(warp)), outer_name_(std::move(outer_name)),
      outer_(std::move(outer)) {
  check_structure();
  for (const auto &p : params_)
    p.validate();
  refresh_cache();
  if (lsfn_)
    this->lsfn()->validate(dim_);
}

void Kernel::refresh_cache() {
  values_.resize(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i)
    values_[i] = params_[i].value;
}

void Kernel::check_structure() const {
  const auto fail = [this](const std::string &why) {
    throw InputError(std::string(to_string(kind_)) + " kernel: " + why);
  };
  if (dim_ < 1 || dim_ > kMaxDim)
    fail("dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  const auto d = static_cast<std::size_t>(dim_);
  const auto expect_params = [&](std::size_t n) {
    if (params_.size() != n)
      fail("expected " + std::to_string(n) + " parameters, got " +
           std::to_string(params_.size()));
  };
  const auto expect_children = [&](std::size_t n) {
    if (children_.size() != n)
      fail("expected " + std::to_string(n) + " child kernels, got " +
           std::to_string(children_.size()));
  };
  switch (kind_) {
  case KernelKind::Exponential:
  case KernelKind::Matern32:
  case KernelKind::Matern52:
  case KernelKind::SquaredExp:
    expect_params(1 + d);
    expect_children(0);
    break;
  case KernelKind::NeuralNet:
    expect_params(2 + d);
    expect_children(0);
    break;
  case KernelKind::NeuralNetShifted:
    expect_params(2 + 2 * d);
    expect_children(0);
    break;
  case KernelKind::Gibbs:
    if (!lsfn_)
      fail("missing length-scale function");
    expect_params(LengthScaleFn::uses_c1(lsfn_->kind) ? 3 : 2);
    expect_children(0);
    break;
  case KernelKind::Warped:
    if (!warp_)
      fail("missing warp map");
    expect_children(1);
    expect_params(warp_->uses_c1() ? 1 : 0);
    warp_->validate(dim_);
    if (children_[0].dim() != warp_->output_dim(dim_))
      fail("child dimension " + std::to_string(children_[0].dim()) +
           " does not match warp output dimension " +
           std::to_string(warp_->output_dim(dim_)));
    break;
  case KernelKind::Sum:
  case KernelKind::Product:
    expect_params(0);
    expect_children(2);
    break;
  case KernelKind::Scaled:
  case KernelKind::ShiftedConst:
    expect_params(1);
    expect_children(1);
    break;
  case KernelKind::OuterFn:
    expect_params(0);
    expect_children(1);
    if (!outer_)
      fail("missing outer function '" + outer_name_ + "'");
    break;
  }
  if (kind_ != KernelKind::Warped) {
    for (const auto &c : children_) {
      if (c.dim() != dim_)
        fail("child dimension " + std::to_string(c.dim()) + " differs from " +
             std::to_string(dim_));
    }
  }
}

Kernel Kernel::stationary(KernelKind kind, double variance, std::vector<double> lengths) {
  if (!is_table_kind(kind))
    throw InputError(std::string(to_string(kind)) + " is not a stationary table kind");
  std::vector<HyperParam> ps{positive("variance", variance)};
  for (std::size_t i = 0; i < lengths.size(); ++i)
    ps.push_back(positive(indexed("length", i), lengths[i]));
  return Kernel(kind, static_cast<int>(lengths.size()), std::move(ps), {});
}

Kernel Kernel::exponential(int dim, double variance, double length) {
  return stationary(KernelKind::Exponential, variance, std::vector<double>(dim, length));
}
Kernel Kernel::matern32(int dim, double variance, double length) {
  return stationary(KernelKind::Matern32, variance, std::vector<double>(dim, length));
}
Kernel Kernel::matern52(int dim, double variance, double length) {
  return stationary(KernelKind::Matern52, variance, std::vector<double>(dim, length));
}
Kernel Kernel::squared_exp(int dim, double variance, double length) {
  return stationary(KernelKind::SquaredExp, variance, std::vector<double>(dim, length));
}

Kernel Kernel::neural_net(double variance, std::vector<double> sigmas) {
  if (sigmas.size() < 2)
    throw InputError("neural-network kernel needs sigma_0 plus one sigma per axis");
  std::vector<HyperParam> ps{positive("variance", variance)};
  for (std::size_t i = 0; i < sigmas.size(); ++i)
    ps.push_back(positive(indexed("sigma", i), sigmas[i]));
  return Kernel(KernelKind::NeuralNet, static_cast<int>(sigmas.size()) - 1, std::move(ps), {});
}

Kernel Kernel::neural_net(int dim, double variance, double sigma) {
  return neural_net(variance, std::vector<double>(dim + 1, sigma));
}

Kernel Kernel::neural_net_shifted(double variance, std::vector<double> sigmas,
                                  std::vector<double> taus) {
  if (sigmas.size() < 2 || taus.size() + 1 != sigmas.size())
    throw InputError("shifted neural-network kernel needs d + 1 sigmas and d shifts");
  std::vector<HyperParam> ps{positive("variance", variance)};
  for (std::size_t i = 0; i < sigmas.size(); ++i)
    ps.push_back(positive(indexed("sigma", i), sigmas[i]));
  for (std::size_t i = 0; i < taus.size(); ++i)
    ps.push_back(linear_param(indexed("tau", i), taus[i], std::min(-kShiftBound, taus[i]),
                              std::max(kShiftBound, taus[i])));
  return Kernel(KernelKind::NeuralNetShifted, static_cast<int>(taus.size()), std::move(ps), {});
}

Kernel Kernel::gibbs(int dim, double variance, LengthScaleFn lsfn) {
  lsfn.validate(dim);
  std::vector<HyperParam> ps{positive("variance", variance)};
  if (LengthScaleFn::uses_c1(lsfn.kind)) {
    if (lsfn.kind == LengthScaleKind::Quadratic)
      ps.push_back(linear_param("c1", lsfn.c1, 0.0, std::max(kPosUpper, lsfn.c1)));
    else
      ps.push_back(positive("c1", lsfn.c1));
  }
  const double limit = LengthScaleFn::c2_limit(lsfn.kind);
  ps.push_back(log_param("c2", lsfn.c2, std::min(limit + 1e-9, lsfn.c2),
                         std::max(kPosUpper, lsfn.c2), limit));
  return Kernel(KernelKind::Gibbs, dim, std::move(ps), {}, lsfn);
}

Kernel Kernel::warped(WarpMap warp, Kernel child) {
  const int dim = warp.kind == WarpKind::PeriodicPair ? child.dim() - 1 : child.dim();
  std::vector<HyperParam> ps;
  if (warp.uses_c1())
    ps.push_back(positive("warp_c1", warp.c1));
  return Kernel(KernelKind::Warped, dim, std::move(ps), {std::move(child)}, std::nullopt, warp);
}

Kernel Kernel::sum(Kernel a, Kernel b) {
  const int d = a.dim();
  return Kernel(KernelKind::Sum, d, {}, {std::move(a), std::move(b)});
}

Kernel Kernel::product(Kernel a, Kernel b) {
  const int d = a.dim();
  return Kernel(KernelKind::Product, d, {}, {std::move(a), std::move(b)});
}

Kernel Kernel::scaled(double c, Kernel k) {
  const int d = k.dim();
  return Kernel(KernelKind::Scaled, d, {positive("c", c)}, {std::move(k)});
}

Kernel Kernel::shifted_const(Kernel k, double c) {
  const int d = k.dim();
  return Kernel(KernelKind::ShiftedConst, d, {positive("c", c)}, {std::move(k)});
}

Kernel Kernel::outer(std::string name, OuterFunction g, Kernel k) {
  const int d = k.dim();
  return Kernel(KernelKind::OuterFn, d, {}, {std::move(k)}, std::nullopt, std::nullopt,
                std::move(name), std::move(g));
}

std::optional<LengthScaleFn> Kernel::lsfn() const {
  if (!lsfn_)
    return std::nullopt;
  LengthScaleFn f = *lsfn_;
  if (LengthScaleFn::uses_c1(f.kind)) {
    f.c1 = params_[1].value;
    f.c2 = params_[2].value;
  } else {
    f.c2 = params_[1].value;
  }
  return f;
}

std::optional<WarpMap> Kernel::warp() const {
  if (!warp_)
    return std::nullopt;
  WarpMap w = *warp_;
  if (w.uses_c1())
    w.c1 = params_[0].value;
  return w;
}

bool Kernel::is_stationary() const {
  switch (kind_) {
  case KernelKind::Exponential:
  case KernelKind::Matern32:
  case KernelKind::Matern52:
  case KernelKind::SquaredExp:
    return true;
  case KernelKind::Gibbs:
    return lsfn_->kind == LengthScaleKind::Constant;
  case KernelKind::Sum:
  case KernelKind::Product:
  case KernelKind::Scaled:
  case KernelKind::ShiftedConst:
    return std::all_of(children_.begin(), children_.end(),
                       [](const Kernel &c) { return c.is_stationary(); });
  default:
    return false;
  }
}

double Kernel::operator()(std::span<const double> x, std::span<const double> xp) const {
  if (static_cast<int>(x.size()) != dim_ || static_cast<int>(xp.size()) != dim_)
    throw InputError("kernel of dimension " + std::to_string(dim_) +
                     " evaluated at points of dimension " + std::to_string(x.size()) + " and " +
                     std::to_string(xp.size()));
  switch (kind_) {
  case KernelKind::Exponential:
  case KernelKind::Matern32:
  case KernelKind::Matern52:
  case KernelKind::SquaredExp:
    return eval_stationary(x, xp);
  case KernelKind::NeuralNet:
  case KernelKind::NeuralNetShifted:
    return eval_nn(x, xp);
  case KernelKind::Gibbs:
    return eval_gibbs(x, xp);
  case KernelKind::Warped:
    return eval_warped(x, xp);
  case KernelKind::Sum:
    return children_[0](x, xp) + children_[1](x, xp);
  case KernelKind::Product:
    return children_[0](x, xp) * children_[1](x, xp);
  case KernelKind::Scaled:
    return values_[0] * children_[0](x, xp);
  case KernelKind::ShiftedConst:
    return children_[0](x, xp) + values_[0];
  case KernelKind::OuterFn:
    // g(x) g(x') grouped first so the result is bitwise symmetric.
    return children_[0](x, xp) * (outer_(x) * outer_(xp));
  }
  return 0.0;
}

double Kernel::eval_stationary(std::span<const double> x, std::span<const double> xp) const {
  const double variance = values_[0];
  const double *lengths = values_.data() + 1;
  switch (kind_) {
  case KernelKind::SquaredExp: {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double r = (x[i] - xp[i]) / lengths[i];
      s += r * r;
    }
    return variance * std::exp(-0.5 * s);
  }
  case KernelKind::Exponential: {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
      s += std::abs(x[i] - xp[i]) / lengths[i];
    return variance * std::exp(-s);
  }
  case KernelKind::Matern32: {
    const double sqrt3 = std::numbers::sqrt3;
    double prod = 1.0;
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double r = sqrt3 * std::abs(x[i] - xp[i]) / lengths[i];
      prod *= 1.0 + r;
      s += r;
    }
    return variance * prod * std::exp(-s);
  }
  case KernelKind::Matern52: {
    const double sqrt5 = std::sqrt(5.0);
    double prod = 1.0;
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double r = std::abs(x[i] - xp[i]) / lengths[i];
      prod *= 1.0 + sqrt5 * r + 5.0 * r * r / 3.0;
      s += sqrt5 * r;
    }
    return variance * prod * std::exp(-s);
  }
  default:
    return 0.0;
  }
}

double Kernel::eval_nn(std::span<const double> x, std::span<const double> xp) const {
  const double variance = values_[0];
  const double *sigma = values_.data() + 1;
  const double *tau = kind_ == KernelKind::NeuralNetShifted ? sigma + dim_ + 1 : nullptr;
  const double s0 = sigma[0] * sigma[0];
  double q_xx = s0;
  double q_pp = s0;
  double q_xp = s0;
  for (int j = 0; j < dim_; ++j) {
    const double sj = sigma[j + 1] * sigma[j + 1];
    const double a = tau ? x[j] - tau[j] : x[j];
    const double b = tau ? xp[j] - tau[j] : xp[j];
    q_xx += sj * a * a;
    q_pp += sj * b * b;
    q_xp += sj * a * b;
  }
  double arg = 2.0 * q_xp / std::sqrt((1.0 + 2.0 * q_xx) * (1.0 + 2.0 * q_pp));
  arg = std::clamp(arg, -kArcsinClamp, kArcsinClamp);
  return 2.0 * variance / std::numbers::pi * std::asin(arg);
}

double Kernel::eval_gibbs(std::span<const double> x, std::span<const double> xp) const {
  const double variance = values_[0];
  const LengthScaleFn f = *lsfn();
  const double l = f(x);
  const double lp = f(xp);
  if (!(l > 0.0) || !(lp > 0.0))
    throw ParameterError("Gibbs length-scale is not positive at an evaluation point");
  const double s = l * l + lp * lp;
  double r2 = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double diff = x[i] - xp[i];
    r2 += diff * diff;
  }
  const double ratio = 2.0 * l * lp / s;
  return variance * std::pow(ratio, 0.5 * dim_) * std::exp(-r2 / s);
}

double Kernel::eval_warped(std::span<const double> x, std::span<const double> xp) const {
  const WarpMap w = *warp();
  const auto out_dim = static_cast<std::size_t>(w.output_dim(dim_));
  std::array<double, kMaxDim + 1> mx{};
  std::array<double, kMaxDim + 1> mxp{};
  w.apply(x, std::span<double>(mx.data(), out_dim));
  w.apply(xp, std::span<double>(mxp.data(), out_dim));
  return children_[0](std::span<const double>(mx.data(), out_dim),
                      std::span<const double>(mxp.data(), out_dim));
}

std::size_t Kernel::num_params() const {
  std::size_t n = params_.size();
  for (const auto &c : children_)
    n += c.num_params();
  return n;
}

std::vector<HyperParam> Kernel::flat_params() const {
  std::vector<HyperParam> out = params_;
  for (std::size_t i = 0; i < children_.size(); ++i) {
    for (auto p : children_[i].flat_params()) {
      p.name = "k" + std::to_string(i) + "." + p.name;
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<double> Kernel::flat_values() const {
  std::vector<double> out;
  out.reserve(num_params());
  for (const auto &p : flat_params())
    out.push_back(p.value);
  return out;
}

// Applies f(HyperParam&, flat index) to every parameter of a copy, then
// revalidates the copy.
template <class F> Kernel Kernel::map_flat(F &&f) const {
  std::size_t next = 0;
  std::function<Kernel(const Kernel &)> rebuild = [&](const Kernel &k) {
    std::vector<HyperParam> ps = k.params_;
    for (auto &p : ps)
      f(p, next++);
    std::vector<Kernel> kids;
    kids.reserve(k.children_.size());
    for (const auto &c : k.children_)
      kids.push_back(rebuild(c));
    return Kernel(k.kind_, k.dim_, std::move(ps), std::move(kids), k.lsfn_, k.warp_,
                  k.outer_name_, k.outer_);
  };
  return rebuild(*this);
}

Kernel Kernel::with_values(std::span<const double> values) const {
  if (values.size() != num_params())
    throw InputError("expected " + std::to_string(num_params()) + " parameter values, got " +
                     std::to_string(values.size()));
  return map_flat([&](HyperParam &p, std::size_t i) { p.value = values[i]; });
}

Kernel Kernel::with_bounds(std::span<const ParamBounds> bounds) const {
  if (bounds.size() != num_params())
    throw InputError("expected " + std::to_string(num_params()) + " parameter bounds, got " +
                     std::to_string(bounds.size()));
  return map_flat([&](HyperParam &p, std::size_t i) {
    p.lower = bounds[i].lower;
    p.upper = bounds[i].upper;
    p.value = std::clamp(p.value, p.lower, p.upper);
  });
}

Kernel Kernel::with_axis(int axis) const {
  std::vector<Kernel> kids;
  kids.reserve(children_.size());
  for (const auto &c : children_)
    kids.push_back(c.with_axis(axis));
  auto lsfn = lsfn_;
  auto warp = warp_;
  if (lsfn)
    lsfn->axis = axis;
  if (warp)
    warp->axis = axis;
  return Kernel(kind_, dim_, params_, std::move(kids), lsfn, warp, outer_name_, outer_);
}

Eigen::MatrixXd gram_matrix(const Kernel &k, const PointSet &X) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto xi = row_span(X, i);
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = k(xi, row_span(X, j));
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

Vector cross_covariance(const Kernel &k, const PointSet &X, std::span<const double> x) {
  Vector out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    out[i] = k(x, row_span(X, i));
  return out;
}

const char *to_string(KernelKind k) {
  switch (k) {
  case KernelKind::Exponential:
    return "Exponential";
  case KernelKind::Matern32:
    return "Matern32";
  case KernelKind::Matern52:
    return "Matern52";
  case KernelKind::SquaredExp:
    return "SquaredExp";
  case KernelKind::NeuralNet:
    return "NeuralNet";
  case KernelKind::NeuralNetShifted:
    return "NeuralNetShifted";
  case KernelKind::Gibbs:
    return "Gibbs";
  case KernelKind::Warped:
    return "Warped";
  case KernelKind::Sum:
    return "Sum";
  case KernelKind::Product:
    return "Product";
  case KernelKind::Scaled:
    return "Scaled";
  case KernelKind::ShiftedConst:
    return "ShiftedConst";
  case KernelKind::OuterFn:
    return "OuterFn";
  }
  return "?";
}

KernelKind kernel_kind_from_string(const std::string &s) {
  for (int i = 0; i <= static_cast<int>(KernelKind::OuterFn); ++i) {
    const auto k = static_cast<KernelKind>(i);
    if (s == to_string(k))
      return k;
  }
  throw InputError("unknown kernel kind '" + s + "'");
}

} // namespace discgp

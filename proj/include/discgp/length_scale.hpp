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

#include <span>
#include <utility>
#include <string>

namespace discgp {

enum class LengthScaleKind { Constant, Quadratic, Erf, Logistic, Tanh, Arctan };

/// Input-dependent length-scale l(x) for the Gibbs kernel.
///
///   Constant   l(x) = c2
///   Quadratic  l(x) = c1 x_a^2 + c2
///   Erf        l(x) = erf(c1 x_a) + c2,          c2 > 1
///   Logistic   l(x) = 1 / (1 + exp(c1 x_a)) + c2, c2 > 0
///   Tanh       l(x) = tanh(c1 x_a) + c2,         c2 > 1
///   Arctan     l(x) = atan(c1 x_a) + c2,         c2 > pi/2
///
/// where x_a is coordinate `axis` of x.
struct LengthScaleFn {
  LengthScaleKind kind = LengthScaleKind::Constant;
  double c1 = 0.0;
  double c2 = 1.0;
  int axis = 0;

  double operator()(std::span<const double> x) const;

  /// c2 must be strictly greater than this.
  static double c2_limit(LengthScaleKind kind);
  /// Kinds whose shape depends on c1.
  static bool uses_c1(LengthScaleKind kind) { return kind != LengthScaleKind::Constant; }

  /// Throws ParameterError if the kind constraint or axis range is violated.
  void validate(int dim) const;
};

/// Saturating sigmoid shared by length-scale functions and warps. The logistic
/// variant is decreasing, matching 1 / (1 + exp(z)).
enum class SigmoidKind { Erf, Logistic, Tanh, Arctan };
double sigmoid(SigmoidKind kind, double z);
/// Closure of the sigmoid's range.
std::pair<double, double> sigmoid_range(SigmoidKind kind);

const char *to_string(LengthScaleKind k);
LengthScaleKind length_scale_kind_from_string(const std::string &s);

} // namespace discgp

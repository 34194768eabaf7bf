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

#include "discgp/length_scale.hpp"

#include <cmath>
#include <numbers>

#include "discgp/types.hpp"

namespace discgp {

double sigmoid(SigmoidKind kind, double z) {
  switch (kind) {
  case SigmoidKind::Erf:
    return std::erf(z);
  case SigmoidKind::Logistic:
    return 1.0 / (1.0 + std::exp(z));
  case SigmoidKind::Tanh:
    return std::tanh(z);
  case SigmoidKind::Arctan:
    return std::atan(z);
  }
  return 0.0;
}

std::pair<double, double> sigmoid_range(SigmoidKind kind) {
  switch (kind) {
  case SigmoidKind::Logistic:
    return {0.0, 1.0};
  case SigmoidKind::Arctan:
    return {-std::numbers::pi / 2, std::numbers::pi / 2};
  default:
    return {-1.0, 1.0};
  }
}

namespace {

SigmoidKind as_sigmoid(LengthScaleKind k) {
  switch (k) {
  case LengthScaleKind::Erf:
    return SigmoidKind::Erf;
  case LengthScaleKind::Logistic:
    return SigmoidKind::Logistic;
  case LengthScaleKind::Tanh:
    return SigmoidKind::Tanh;
  default:
    return SigmoidKind::Arctan;
  }
}

} // namespace

double LengthScaleFn::operator()(std::span<const double> x) const {
  const double xa = x[axis];
  switch (kind) {
  case LengthScaleKind::Constant:
    return c2;
  case LengthScaleKind::Quadratic:
    return c1 * xa * xa + c2;
  default:
    return sigmoid(as_sigmoid(kind), c1 * xa) + c2;
  }
}

double LengthScaleFn::c2_limit(LengthScaleKind kind) {
  switch (kind) {
  case LengthScaleKind::Erf:
  case LengthScaleKind::Tanh:
    return 1.0;
  case LengthScaleKind::Arctan:
    return std::numbers::pi / 2;
  default:
    return 0.0;
  }
}

void LengthScaleFn::validate(int dim) const {
  if (axis < 0 || axis >= dim)
    throw ParameterError("length-scale axis " + std::to_string(axis) + " outside [0, " +
                         std::to_string(dim) + ")");
  if (!(c2 > c2_limit(kind)))
    throw ParameterError(std::string("length-scale ") + to_string(kind) + " requires c2 > " +
                         std::to_string(c2_limit(kind)));
  if (kind == LengthScaleKind::Quadratic && c1 < 0.0)
    throw ParameterError("quadratic length-scale requires c1 >= 0");
}

const char *to_string(LengthScaleKind k) {
  switch (k) {
  case LengthScaleKind::Constant:
    return "Constant";
  case LengthScaleKind::Quadratic:
    return "Quadratic";
  case LengthScaleKind::Erf:
    return "Erf";
  case LengthScaleKind::Logistic:
    return "Logistic";
  case LengthScaleKind::Tanh:
    return "Tanh";
  case LengthScaleKind::Arctan:
    return "Arctan";
  }
  return "?";
}

LengthScaleKind length_scale_kind_from_string(const std::string &s) {
  for (auto k : {LengthScaleKind::Constant, LengthScaleKind::Quadratic, LengthScaleKind::Erf,
                 LengthScaleKind::Logistic, LengthScaleKind::Tanh, LengthScaleKind::Arctan}) {
    if (s == to_string(k))
      return k;
  }
  throw InputError("unknown length-scale kind '" + s + "'");
}

} // namespace discgp

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

#include "discgp/warp.hpp"

#include <cmath>
#include <numbers>

#include "discgp/types.hpp"

namespace discgp {

SigmoidKind as_sigmoid(WarpKind kind) {
  switch (kind) {
  case WarpKind::Erf:
    return SigmoidKind::Erf;
  case WarpKind::Logistic:
    return SigmoidKind::Logistic;
  case WarpKind::Tanh:
    return SigmoidKind::Tanh;
  case WarpKind::Arctan:
    return SigmoidKind::Arctan;
  case WarpKind::PeriodicPair:
    break;
  }
  throw InputError("periodic warp has no sigmoid");
}

void WarpMap::apply(std::span<const double> x, std::span<double> out) const {
  const auto d = x.size();
  if (kind != WarpKind::PeriodicPair) {
    for (std::size_t i = 0; i < d; ++i)
      out[i] = x[i];
    out[axis] = sigmoid(as_sigmoid(kind), c1 * x[axis]);
    return;
  }
  // Pair occupies slots axis and axis + 1; later coordinates shift by one.
  std::size_t j = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (static_cast<int>(i) == axis) {
      const double phase = 2.0 * std::numbers::pi * x[i] / period;
      out[j++] = std::cos(phase);
      out[j++] = std::sin(phase);
    } else {
      out[j++] = x[i];
    }
  }
}

std::vector<double> WarpMap::operator()(std::span<const double> x) const {
  std::vector<double> out(output_dim(static_cast<int>(x.size())));
  apply(x, out);
  return out;
}

void WarpMap::validate(int input_dim) const {
  if (axis < 0 || axis >= input_dim)
    throw ParameterError("warp axis " + std::to_string(axis) + " outside [0, " +
                         std::to_string(input_dim) + ")");
  if (!std::isfinite(c1))
    throw ParameterError("warp c1 must be finite");
  if (kind == WarpKind::PeriodicPair && !(period > 0.0))
    throw ParameterError("periodic warp requires period > 0");
}

const char *to_string(WarpKind k) {
  switch (k) {
  case WarpKind::Erf:
    return "Erf";
  case WarpKind::Logistic:
    return "Logistic";
  case WarpKind::Tanh:
    return "Tanh";
  case WarpKind::Arctan:
    return "Arctan";
  case WarpKind::PeriodicPair:
    return "PeriodicPair";
  }
  return "?";
}

WarpKind warp_kind_from_string(const std::string &s) {
  for (auto k : {WarpKind::Erf, WarpKind::Logistic, WarpKind::Tanh, WarpKind::Arctan,
                 WarpKind::PeriodicPair}) {
    if (s == to_string(k))
      return k;
  }
  throw InputError("unknown warp kind '" + s + "'");
}

} // namespace discgp

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
#include <string>
#include <vector>

#include "discgp/length_scale.hpp"

namespace discgp {

enum class WarpKind { Erf, Logistic, Tanh, Arctan, PeriodicPair };

/// Deterministic input map M used by warped kernels.
///
/// Sigmoid kinds replace coordinate `axis` by sigmoid(c1 * x_axis) and leave
/// the rest untouched. PeriodicPair replaces it by the pair
/// (cos(2 pi x / period), sin(2 pi x / period)), so the output has one more
/// coordinate than the input.
struct WarpMap {
  WarpKind kind = WarpKind::Tanh;
  double c1 = 1.0;
  int axis = 0;
  double period = 1.0;

  int output_dim(int input_dim) const {
    return kind == WarpKind::PeriodicPair ? input_dim + 1 : input_dim;
  }
  bool uses_c1() const { return kind != WarpKind::PeriodicPair; }

  /// Writes M(x) into `out`, which must have output_dim(x.size()) entries.
  void apply(std::span<const double> x, std::span<double> out) const;
  std::vector<double> operator()(std::span<const double> x) const;

  void validate(int input_dim) const;
};

SigmoidKind as_sigmoid(WarpKind kind);
const char *to_string(WarpKind k);
WarpKind warp_kind_from_string(const std::string &s);

} // namespace discgp

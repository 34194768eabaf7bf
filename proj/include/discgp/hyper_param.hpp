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

#include <string>

namespace discgp {

enum class Scale { Linear, Log };

/// A named kernel hyperparameter with box bounds.
///
/// Log-scale parameters are searched in the unconstrained coordinate
/// theta = log(value - offset), so any theta maps to a value strictly above
/// `offset`. The offset carries kind constraints such as c2 > pi/2 for the
/// arctangent length-scale.
struct HyperParam {
  std::string name;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  Scale scale = Scale::Linear;
  double offset = 0.0;

  /// Throws ParameterError when the invariants do not hold.
  void validate() const;

  double to_search(double v) const;
  double from_search(double theta) const;
  double search_lower() const { return to_search(lower); }
  double search_upper() const { return to_search(upper); }
};

HyperParam linear_param(std::string name, double value, double lower, double upper);
HyperParam log_param(std::string name, double value, double lower, double upper,
                     double offset = 0.0);

const char *to_string(Scale s);
Scale scale_from_string(const std::string &s);

} // namespace discgp

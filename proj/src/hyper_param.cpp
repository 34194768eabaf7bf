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

#include "discgp/hyper_param.hpp"

#include <cmath>

#include "discgp/types.hpp"

namespace discgp {

void HyperParam::validate() const {
  const auto fail = [this](const std::string &why) {
    throw ParameterError("parameter '" + name + "': " + why);
  };
  if (!std::isfinite(value) || !std::isfinite(lower) || !std::isfinite(upper))
    fail("value and bounds must be finite");
  if (lower > upper)
    fail("lower bound exceeds upper bound");
  if (value < lower || value > upper)
    fail("value " + std::to_string(value) + " outside [" + std::to_string(lower) + ", " +
         std::to_string(upper) + "]");
  if (scale == Scale::Log) {
    if (!(lower > offset))
      fail("log-scale lower bound must exceed offset " + std::to_string(offset));
    if (!(lower > 0.0))
      fail("log-scale lower bound must be positive");
  }
}

double HyperParam::to_search(double v) const {
  return scale == Scale::Log ? std::log(v - offset) : v;
}

double HyperParam::from_search(double theta) const {
  return scale == Scale::Log ? offset + std::exp(theta) : theta;
}

HyperParam linear_param(std::string name, double value, double lower, double upper) {
  return HyperParam{std::move(name), value, lower, upper, Scale::Linear, 0.0};
}

HyperParam log_param(std::string name, double value, double lower, double upper,
                     double offset) {
  return HyperParam{std::move(name), value, lower, upper, Scale::Log, offset};
}

const char *to_string(Scale s) { return s == Scale::Log ? "log" : "linear"; }

Scale scale_from_string(const std::string &s) {
  if (s == "log")
    return Scale::Log;
  if (s == "linear")
    return Scale::Linear;
  throw InputError("unknown parameter scale '" + s + "'");
}

} // namespace discgp

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

#include "discgp/types.hpp"

#include <cmath>

namespace discgp {

Box::Box(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.empty())
    throw InputError("box bounds must be non-empty and of equal length");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i]))
      throw InputError("box axis " + std::to_string(i) + " must satisfy finite lower < upper");
  }
}

Box Box::uniform(int dim, double lo, double hi) {
  if (dim < 1)
    throw InputError("box dimension must be positive");
  return Box(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

double Box::diagonal() const {
  double s = 0.0;
  for (int i = 0; i < dim(); ++i)
    s += width(i) * width(i);
  return std::sqrt(s);
}

bool Box::contains(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != dim())
    return false;
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol)
      return false;
  }
  return true;
}

} // namespace discgp

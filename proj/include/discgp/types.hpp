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
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace discgp {

/// Point sets are stored one point per row, row-major so that a row is a
/// contiguous span.
using PointSet = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or dimensionally inconsistent inputs.
class InputError : public Error {
public:
  using Error::Error;
};

/// A hyperparameter outside its bounds or violating a kind constraint.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Factorization failure that jitter escalation could not repair.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Axis-aligned input domain.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  Box() = default;
  Box(std::vector<double> lo, std::vector<double> hi);
  /// Same interval on every axis.
  static Box uniform(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lower.size()); }
  double width(int axis) const { return upper[axis] - lower[axis]; }
  double diagonal() const;
  bool contains(std::span<const double> x, double tol = 0.0) const;
};

} // namespace discgp

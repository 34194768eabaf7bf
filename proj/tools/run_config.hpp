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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "discgp/benchmark.hpp"
#include "discgp/types.hpp"

namespace discgp::cli {

/// Parses "lo,hi" (same interval on every axis) or "lo,hi;lo,hi;..." (one
/// interval per axis).
Box parse_domain(const std::string &text, int dim);

StratumPlacement placement_from_string(const std::string &s);
const char *to_string(StratumPlacement p);

/// Benchmark sweep description as read from a config document:
///
///   { "functions": [ {"type": "step", "d": 2, "jump": 0.0, "domain": "-2,2"},
///                    {"type": "nonstationary"} ],
///     "methods": "standard" | ["SquarExp", "Mat32", ...],
///     "replicates": 20, "n_train": 0, "n_test": 1000, "master_seed": 1,
///     "n_restarts": 10, "max_evals": 2000, "threads": 0,
///     "placement": "center", "output_dir": "results" }
struct RunConfig {
  nlohmann::json functions = nlohmann::json::array();
  std::vector<std::string> methods;
  int replicates = 20;
  int n_train = 0;
  int n_test = 1000;
  std::uint64_t master_seed = 1;
  int n_restarts = 10;
  int max_evals = 2000;
  int threads = 0;
  StratumPlacement placement = StratumPlacement::Center;
  std::string output_dir = "results";

  /// Throws InputError on unknown keys, bad types or out-of-range values.
  static RunConfig from_json(const nlohmann::json &j);
  static RunConfig load(const std::string &path);

  /// Everything that determines the result rows; excludes threads and paths.
  nlohmann::json canonical() const;
  ExperimentConfig to_experiment() const;
};

/// 64-bit FNV-1a of the canonical serialisation.
std::uint64_t config_hash(const nlohmann::json &canonical);
std::string hex64(std::uint64_t v);

/// Relative paths are placed under $DISCGP_OUTPUT_DIR when it is set.
std::string resolve_output(const std::string &path);

/// Writes `text` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string &path, const std::string &text);

} // namespace discgp::cli

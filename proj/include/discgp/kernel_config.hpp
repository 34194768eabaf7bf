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

#include <json.hpp>

#include "discgp/kernel.hpp"

namespace discgp {

/// Kernel configurations as nested key-value documents:
///
///   { "kind": "Gibbs", "dim": 2,
///     "params": [ {"name": "variance", "value": 1.0, "lower": 1e-6, "upper": 1e3,
///                  "scale": "log", "offset": 0.0}, ... ],
///     "lsfn": {"kind": "Arctan", "axis": 0},
///     "warp": {"kind": "Tanh", "axis": 0, "period": 1.0},
///     "outer_fn": "name",
///     "children": [ ... ] }
///
/// Optional keys are omitted when unused. Doubles are written with enough
/// digits to round-trip exactly.
nlohmann::json to_json(const Kernel &k);
Kernel kernel_from_json(const nlohmann::json &j);

/// OuterFn compositions serialize their function by name. Names must be
/// registered before a config referencing them is loaded.
void register_outer_function(const std::string &name, OuterFunction g);
OuterFunction lookup_outer_function(const std::string &name);

std::string kernel_to_string(const Kernel &k, int indent = 2);
Kernel kernel_from_string(const std::string &text);
Kernel load_kernel(const std::string &path);
void save_kernel(const Kernel &k, const std::string &path);

} // namespace discgp

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


#include "run_config.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace discgp::cli {

namespace {

std::vector<double> parse_pair(const std::string &text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw InputError("domain interval '" + text + "' must be 'lo,hi'");
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double lo = std::stod(a, &used);
    if (used != a.size())
      throw std::invalid_argument(a);
    const double hi = std::stod(b, &used);
    if (used != b.size())
      throw std::invalid_argument(b);
    return {lo, hi};
  } catch (const std::logic_error &) {
    throw InputError("domain interval '" + text + "' is not numeric");
  }
}

template <class T> T get_or(const nlohmann::json &j, const char *key, T fallback) {
  if (!j.contains(key))
    return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception &) {
    throw InputError(std::string("config key '") + key + "' has the wrong type");
  }
}

TestFunction function_from_json(const nlohmann::json &f) {
  if (!f.is_object() || !f.contains("type"))
    throw InputError("each function needs a \"type\"");
  const auto type = get_or<std::string>(f, "type", "");
  if (type == "step") {
    const int d = get_or<int>(f, "d", 1);
    if (d < 1 || d > 10)
      throw InputError("step function dimension must be in 1..10");
    const double jump = get_or<double>(f, "jump", 0.0);
    if (f.contains("domain"))
      return TestFunction::step(parse_domain(get_or<std::string>(f, "domain", ""), d), jump);
    return TestFunction::step(d, jump);
  }
  if (type == "nonstationary")
    return TestFunction::nonstationary();
  throw InputError("unknown function type '" + type + "'");
}

} // namespace

Box parse_domain(const std::string &text, int dim) {
  if (dim < 1)
    throw InputError("dimension must be positive");
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ';');)
    parts.push_back(item);
  if (parts.size() != 1 && parts.size() != static_cast<std::size_t>(dim))
    throw InputError("domain '" + text + "' has " + std::to_string(parts.size()) +
                     " intervals for dimension " + std::to_string(dim));
  std::vector<double> lo, hi;
  for (int j = 0; j < dim; ++j) {
    const auto p = parse_pair(parts.size() == 1 ? parts[0] : parts[j]);
    lo.push_back(p[0]);
    hi.push_back(p[1]);
  }
  return Box(lo, hi);
}

StratumPlacement placement_from_string(const std::string &s) {
  if (s == "center")
    return StratumPlacement::Center;
  if (s == "random")
    return StratumPlacement::Random;
  throw InputError("placement must be 'center' or 'random', got '" + s + "'");
}

const char *to_string(StratumPlacement p) {
  return p == StratumPlacement::Center ? "center" : "random";
}

RunConfig RunConfig::from_json(const nlohmann::json &j) {
  if (!j.is_object())
    throw InputError("benchmark config must be an object");
  static const std::set<std::string> known{
      "functions", "methods", "replicates", "n_train",   "n_test",    "master_seed",
      "n_restarts", "max_evals", "threads",   "placement", "output_dir"};
  for (const auto &[key, _] : j.items())
    if (!known.count(key))
      throw InputError("unknown config key '" + key + "'");

  RunConfig c;
  if (!j.contains("functions") || !j["functions"].is_array() || j["functions"].empty())
    throw InputError("config needs a non-empty \"functions\" list");
  c.functions = j["functions"];
  for (const auto &f : c.functions)
    function_from_json(f);

  const auto methods = j.value("methods", nlohmann::json("standard"));
  if (methods.is_string() && methods.get<std::string>() == "standard") {
    for (const auto &m : standard_methods())
      c.methods.push_back(m.label);
  } else if (methods.is_array()) {
    for (const auto &m : methods) {
      if (!m.is_string())
        throw InputError("method labels must be strings");
      method_by_label(m.get<std::string>());
      c.methods.push_back(m.get<std::string>());
    }
  } else {
    throw InputError("\"methods\" must be \"standard\" or a list of labels");
  }

  c.replicates = get_or(j, "replicates", c.replicates);
  c.n_train = get_or(j, "n_train", c.n_train);
  c.n_test = get_or(j, "n_test", c.n_test);
  c.master_seed = get_or(j, "master_seed", c.master_seed);
  c.n_restarts = get_or(j, "n_restarts", c.n_restarts);
  c.max_evals = get_or(j, "max_evals", c.max_evals);
  c.threads = get_or(j, "threads", c.threads);
  c.placement = placement_from_string(get_or<std::string>(j, "placement", "center"));
  c.output_dir = get_or(j, "output_dir", c.output_dir);
  if (c.threads < 0)
    throw InputError("threads must be non-negative");
  c.to_experiment().validate();
  return c;
}

RunConfig RunConfig::load(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open config '" + path + "'");
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error &e) {
    throw InputError("config parse error in '" + path + "': " + e.what());
  }
}

nlohmann::json RunConfig::canonical() const {
  return {{"functions", functions},   {"methods", methods},
          {"replicates", replicates}, {"n_train", n_train},
          {"n_test", n_test},         {"master_seed", master_seed},
          {"n_restarts", n_restarts}, {"max_evals", max_evals},
          {"placement", to_string(placement)}};
}

ExperimentConfig RunConfig::to_experiment() const {
  ExperimentConfig e;
  for (const auto &f : functions)
    e.functions.push_back(function_from_json(f));
  for (const auto &m : methods)
    e.methods.push_back(method_by_label(m));
  e.replicates = replicates;
  e.n_train = n_train;
  e.n_test = n_test;
  e.master_seed = master_seed;
  e.n_restarts = n_restarts;
  e.max_evals = max_evals;
  e.threads = threads;
  e.placement = placement;
  return e;
}

std::uint64_t config_hash(const nlohmann::json &canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string resolve_output(const std::string &path) {
  const char *dir = std::getenv("DISCGP_OUTPUT_DIR");
  const std::filesystem::path p(path);
  if (dir == nullptr || *dir == '\0' || p.is_absolute())
    return path;
  return (std::filesystem::path(dir) / p).string();
}

void write_file_atomic(const std::string &path, const std::string &text) {
  const std::filesystem::path target(path);
  if (target.has_parent_path())
    std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    if (!out || !(out << text) || !out.flush())
      throw Error("cannot write '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot write '" + path + "'");
  }
}

} // namespace discgp::cli

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

#include "discgp/kernel_config.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace discgp {

using nlohmann::json;

namespace {

std::mutex &registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, OuterFunction> &registry() {
  static std::map<std::string, OuterFunction> r = [] {
    std::map<std::string, OuterFunction> init;
    init["identity0"] = [](std::span<const double> x) { return x[0]; };
    init["norm2"] = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x)
        s += v * v;
      return s;
    };
    return init;
  }();
  return r;
}

template <class T> T required(const json &j, const char *key) {
  if (!j.contains(key))
    throw InputError(std::string("kernel config: missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw InputError(std::string("kernel config: bad value for '") + key + "': " + e.what());
  }
}

} // namespace

void register_outer_function(const std::string &name, OuterFunction g) {
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(g);
}

OuterFunction lookup_outer_function(const std::string &name) {
  std::lock_guard lock(registry_mutex());
  auto it = registry().find(name);
  if (it == registry().end())
    throw InputError("unknown outer function '" + name + "'");
  return it->second;
}

json to_json(const Kernel &k) {
  json j;
  j["kind"] = to_string(k.kind());
  j["dim"] = k.dim();
  json ps = json::array();
  for (const auto &p : k.params()) {
    ps.push_back({{"name", p.name},
                  {"value", p.value},
                  {"lower", p.lower},
                  {"upper", p.upper},
                  {"scale", to_string(p.scale)},
                  {"offset", p.offset}});
  }
  j["params"] = ps;
  if (auto f = k.lsfn())
    j["lsfn"] = {{"kind", to_string(f->kind)}, {"axis", f->axis}};
  if (auto w = k.warp())
    j["warp"] = {{"kind", to_string(w->kind)}, {"axis", w->axis}, {"period", w->period}};
  if (k.kind() == KernelKind::OuterFn)
    j["outer_fn"] = k.outer_name();
  if (!k.children().empty()) {
    json kids = json::array();
    for (const auto &c : k.children())
      kids.push_back(to_json(c));
    j["children"] = kids;
  }
  return j;
}

Kernel kernel_from_json(const json &j) {
  if (!j.is_object())
    throw InputError("kernel config must be an object");
  const auto kind = kernel_kind_from_string(required<std::string>(j, "kind"));
  const int dim = required<int>(j, "dim");

  std::vector<HyperParam> params;
  if (j.contains("params")) {
    for (const auto &p : j.at("params")) {
      HyperParam hp;
      hp.name = required<std::string>(p, "name");
      hp.value = required<double>(p, "value");
      hp.lower = required<double>(p, "lower");
      hp.upper = required<double>(p, "upper");
      hp.scale = scale_from_string(p.value("scale", std::string("linear")));
      hp.offset = p.value("offset", 0.0);
      params.push_back(std::move(hp));
    }
  }

  std::optional<LengthScaleFn> lsfn;
  if (j.contains("lsfn")) {
    const auto &l = j.at("lsfn");
    LengthScaleFn f;
    f.kind = length_scale_kind_from_string(required<std::string>(l, "kind"));
    f.axis = l.value("axis", 0);
    lsfn = f;
  }

  std::optional<WarpMap> warp;
  if (j.contains("warp")) {
    const auto &w = j.at("warp");
    WarpMap m;
    m.kind = warp_kind_from_string(required<std::string>(w, "kind"));
    m.axis = w.value("axis", 0);
    m.period = w.value("period", 1.0);
    warp = m;
  }

  std::vector<Kernel> children;
  if (j.contains("children")) {
    for (const auto &c : j.at("children"))
      children.push_back(kernel_from_json(c));
  }

  std::string outer_name;
  OuterFunction outer;
  if (kind == KernelKind::OuterFn) {
    outer_name = required<std::string>(j, "outer_fn");
    outer = lookup_outer_function(outer_name);
  }
  return Kernel(kind, dim, std::move(params), std::move(children), lsfn, warp,
                std::move(outer_name), std::move(outer));
}

std::string kernel_to_string(const Kernel &k, int indent) { return to_json(k).dump(indent); }

Kernel kernel_from_string(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw InputError(std::string("kernel config parse error: ") + e.what());
  }
  return kernel_from_json(j);
}

Kernel load_kernel(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open kernel config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return kernel_from_string(ss.str());
}

void save_kernel(const Kernel &k, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write kernel config '" + path + "'");
  out << kernel_to_string(k) << '\n';
}

} // namespace discgp

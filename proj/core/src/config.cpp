// Copyright 2026 The gridswitch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gridswitch/config.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <gridswitch/error.hpp>

namespace gridswitch {
namespace {

using nlohmann::json;

template <typename T>
void read(const json& obj, const char* key, T& target) {
  if (const auto it = obj.find(key); it != obj.end()) target = it->get<T>();
}

CoverageRule coverage_from(const std::string& name) {
  if (name == "zone") return CoverageRule::kZone;
  if (name == "direct") return CoverageRule::kDirect;
  if (name == "adjacent") return CoverageRule::kAdjacent;
  throw ValidationError("unknown coverage rule '" + name + "'");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, ExperimentConfig cfg) {
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw ParseError("config must be a JSON object", 0);

    DynamicParams& dyn = cfg.dynamics;
    read(doc, "H_default", dyn.h_default);
    read(doc, "xdp_default", dyn.xdp_default);
    read(doc, "fs_hz", dyn.fs_hz);
    if (const auto it = doc.find("coverage"); it != doc.end()) {
      dyn.coverage = coverage_from(it->get<std::string>());
    }
    if (const auto it = doc.find("generators"); it != doc.end()) {
      for (const auto& [bus, entry] : it->items()) {
        const int id = std::stoi(bus);
        if (entry.contains("H")) dyn.h_by_bus[id] = entry.at("H").get<double>();
        if (entry.contains("xdp")) dyn.xdp_by_bus[id] = entry.at("xdp").get<double>();
      }
    }
    read(doc, "horizon", cfg.horizon);
    read(doc, "step", cfg.optimizer.sim.step);
    cfg.cost.fs_hz = dyn.fs_hz;

    if (const auto it = doc.find("cost"); it != doc.end()) {
      read(*it, "phase_weight", cfg.cost.phase_weight);
      read(*it, "speed_weight", cfg.cost.speed_weight);
    }
    if (const auto it = doc.find("optimizer"); it != doc.end()) {
      auto& o = cfg.optimizer;
      read(*it, "alpha", o.alpha);
      read(*it, "beta", o.beta);
      read(*it, "lambda0", o.lambda0);
      read(*it, "max_backtracks", o.max_backtracks);
      read(*it, "min_lambda", o.min_lambda);
      read(*it, "max_iterations", o.max_iterations);
      read(*it, "theta_rel_tol", o.theta_rel_tol);
      read(*it, "theta_abs_tol", o.theta_abs_tol);
    }
    if (const auto it = doc.find("window"); it != doc.end()) {
      read(*it, "horizon", cfg.window.horizon);
      read(*it, "advance", cfg.window.advance);
      read(*it, "duration", cfg.window.duration);
      read(*it, "iterations", cfg.window.iterations);
    }
    if (const auto it = doc.find("disturbance"); it != doc.end()) {
      read(*it, "seed", cfg.disturbance.seed);
      read(*it, "range", cfg.disturbance.range);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what(), 0);
  } catch (const std::logic_error& e) {
    throw ParseError(std::string("config: ") + e.what(), 0);
  }
  return cfg;
}

ExperimentConfig read_config_file(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), std::move(base));
  } catch (const ParseError& e) {
    throw e.in(path.string());
  }
}

}  // namespace gridswitch

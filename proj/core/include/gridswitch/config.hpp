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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include <gridswitch/cost.hpp>
#include <gridswitch/modes.hpp>
#include <gridswitch/scheduler.hpp>
#include <gridswitch/sliding_window.hpp>

namespace gridswitch {

struct DisturbanceConfig {
  std::uint64_t seed = 1;
  double range = 0.3;  // rad
};

/// Everything an experiment run needs besides the case and placement.
struct ExperimentConfig {
  DynamicParams dynamics;
  CostConfig cost;
  OptimizerConfig optimizer;
  WindowConfig window;
  DisturbanceConfig disturbance;
  double horizon = 5.0;
};

/// JSON document; keys absent from it keep the values already in `base`.
///
///     {
///       "H_default": 3.0, "xdp_default": 0.2, "fs_hz": 60.0,
///       "coverage": "zone" | "direct" | "adjacent",
///       "generators": { "<bus id>": { "H": 4.5, "xdp": 0.25 } },
///       "horizon": 5.0, "step": 0.001,
///       "cost": { "phase_weight": 0.5, "speed_weight": 0.025 },
///       "optimizer": { "alpha": 0.4, "beta": 0.1, "lambda0": 0.5, "max_backtracks": 40,
///                      "min_lambda": 1e-9, "max_iterations": 100,
///                      "theta_rel_tol": 1e-3, "theta_abs_tol": 0.0 },
///       "window": { "horizon": 5.0, "advance": 0.1, "duration": 10.0, "iterations": 1 },
///       "disturbance": { "seed": 1, "range": 0.3 }
///     }
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig read_config_file(const std::filesystem::path& path, ExperimentConfig base = {});

}  // namespace gridswitch

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

#include <cmath>
#include <filesystem>
#include <string>

#include <Eigen/Dense>
#include <gridswitch/case_data.hpp>
#include <gridswitch/config.hpp>
#include <gridswitch/dynamics.hpp>
#include <gridswitch/modes.hpp>
#include <gridswitch/system.hpp>

namespace gridswitch::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(GRIDSWITCH_DATA_DIR) / name;
}

// Two machines and one load bus; branch 0 joins the generator buses.
inline constexpr const char* kToyCase = R"(base_mva 100
bus 1 3 0 0 0 0
bus 2 2 0 0 0 0
bus 3 1 0.9 0.3 0 0.05
branch 1 2 0.01 0.12 0.02
branch 2 3 0.02 0.25 0.04 0.97
branch 1 3 0.015 0.2 0.03
gen 1 1.2
gen 2 0.8
)";

inline CaseData toy_case() { return parse_case(kToyCase, CaseFormat::kNative); }

inline ModeSet toy_modes() {
  DynamicParams params;
  params.h_by_bus[2] = 4.0;
  return build_modes(toy_case(), Placement{{0}}, params);
}

struct Fixture118 {
  CaseData data;
  Placement placement;
  ExperimentConfig config;
  ModeSet modes;
  State x0;
};

inline const Fixture118& fixture118() {
  static const Fixture118 f = [] {
    CaseData data = read_case_file(data_path("ieee118.cdf"));
    Placement placement = read_placement_file(data_path("placement118.txt"));
    ExperimentConfig config = read_config_file(data_path("dynparams.json"));
    ModeSet modes = build_modes(data, placement, config.dynamics);
    State x0 = perturb(State::Zero(static_cast<Eigen::Index>(modes.state_dim())),
                       config.disturbance.range, config.disturbance.seed);
    return Fixture118{std::move(data), std::move(placement), config, std::move(modes),
                      std::move(x0)};
  }();
  return f;
}

// xdot = -a_m x with a = (1, 2, 3, ...) per mode.
class ScalarDecay final : public SwitchedSystem {
 public:
  explicit ScalarDecay(std::size_t modes = 2) : modes_(modes) {}
  std::size_t mode_count() const override { return modes_; }
  std::size_t state_dim() const override { return 1; }
  void evaluate(ModeId mode, const State& x, State& dx) const override { dx = -mode * x; }
  void jacobian_transpose_product(ModeId mode, const State&, const Eigen::VectorXd& v,
                                  Eigen::VectorXd& out) const override {
    out = -mode * v;
  }
  using SwitchedSystem::evaluate;

 private:
  std::size_t modes_;
};

// l = w x^2 / 2 summed over components.
class HalfSquare final : public RunningCost {
 public:
  explicit HalfSquare(double w = 1.0) : w_(w) {}
  double value(const State& x) const override { return 0.5 * w_ * x.squaredNorm(); }
  void gradient(const State& x, Eigen::VectorXd& grad) const override { grad = w_ * x; }

 private:
  double w_;
};

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace gridswitch::testing

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

#include <Eigen/Dense>

#include <gridswitch/simulate.hpp>
#include <gridswitch/system.hpp>

namespace gridswitch {

struct CostConfig {
  double phase_weight = 0.5;
  double speed_weight = 1.0 / 40.0;
  double fs_hz = 60.0;
};

/// Phase-spread and frequency-error cost of the swing state:
///   l = w_p |delta - mean(delta)|^2 + w_s |omega|^2,
/// where the mean and the phase sum include the reference generator at phase 0
/// and omega is the deviation from 2 pi f_s.
class RegulationCost final : public RunningCost {
 public:
  explicit RegulationCost(CostConfig config = {});

  double value(const State& x) const override;
  void gradient(const State& x, Eigen::VectorXd& grad) const override;
  const CostConfig& config() const { return config_; }

 private:
  CostConfig config_;
};

double running_cost(const State& x, const CostConfig& config);

/// Same cost over an explicit phase vector of every machine (reference included)
/// and speed deviations.
double running_cost_full(const Eigen::VectorXd& phases, const Eigen::VectorXd& speeds,
                         const CostConfig& config);

/// Trapezoid rule over the trajectory grid. A diverged trajectory costs +inf.
/// Throws ValidationError for an empty trajectory.
double cost(const Trajectory& traj, const RunningCost& ell);

/// l(x(t_k)) at every sample.
Eigen::VectorXd running_cost_samples(const Trajectory& traj, const RunningCost& ell);

}  // namespace gridswitch

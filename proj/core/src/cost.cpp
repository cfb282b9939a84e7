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

#include <gridswitch/cost.hpp>

#include <limits>

#include <gridswitch/error.hpp>

namespace gridswitch {

RegulationCost::RegulationCost(CostConfig config) : config_(config) {
  if (!(config_.phase_weight >= 0.0) || !(config_.speed_weight >= 0.0)) {
    throw ValidationError("cost weights must be non-negative");
  }
}

double RegulationCost::value(const State& x) const { return running_cost(x, config_); }

void RegulationCost::gradient(const State& x, Eigen::VectorXd& grad) const {
  const auto k = x.size() / 2;
  const auto phases = x.head(k);
  // Mean over k + 1 machines; the reference sits at 0.
  const double mean = phases.sum() / static_cast<double>(k + 1);
  grad.head(k) = (2.0 * config_.phase_weight) * (phases.array() - mean).matrix();
  grad.tail(k) = (2.0 * config_.speed_weight) * x.tail(k);
}

double running_cost(const State& x, const CostConfig& config) {
  const auto k = x.size() / 2;
  const auto phases = x.head(k);
  const double mean = phases.sum() / static_cast<double>(k + 1);
  const double spread = (phases.array() - mean).square().sum() + mean * mean;
  return config.phase_weight * spread + config.speed_weight * x.tail(k).squaredNorm();
}

double running_cost_full(const Eigen::VectorXd& phases, const Eigen::VectorXd& speeds,
                         const CostConfig& config) {
  const double mean = phases.mean();
  return config.phase_weight * (phases.array() - mean).square().sum() +
         config.speed_weight * speeds.squaredNorm();
}

Eigen::VectorXd running_cost_samples(const Trajectory& traj, const RunningCost& ell) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(traj.samples()));
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    out(static_cast<Eigen::Index>(k)) = ell.value(traj.state(k));
  }
  return out;
}

double cost(const Trajectory& traj, const RunningCost& ell) {
  if (traj.samples() == 0) throw ValidationError("cannot integrate an empty trajectory");
  if (traj.diverged) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  double prev = ell.value(traj.state(0));
  for (std::size_t k = 1; k < traj.samples(); ++k) {
    const double cur = ell.value(traj.state(k));
    total += 0.5 * (traj.times[k] - traj.times[k - 1]) * (prev + cur);
    prev = cur;
  }
  return total;
}

}  // namespace gridswitch

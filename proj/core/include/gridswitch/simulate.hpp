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

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include <gridswitch/schedule.hpp>
#include <gridswitch/system.hpp>

namespace gridswitch {

struct SimOptions {
  double step = 1e-3;             // s
  double divergence_bound = 1e6;  // on ||x||_2
};

/// Sampled switched trajectory. Column k of `states` is x(times[k]); step k
/// (times[k] -> times[k+1]) runs under `step_modes[k]`.
struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd states;
  std::vector<ModeId> step_modes;
  Schedule schedule;
  bool diverged = false;
  double blowup_time = std::numeric_limits<double>::infinity();

  std::size_t samples() const { return times.size(); }
  State state(std::size_t k) const { return states.col(static_cast<Eigen::Index>(k)); }
  State final_state() const { return state(samples() - 1); }
  /// Mode governing the solution just after sample k (the last sample reuses the last step's mode).
  ModeId mode_at_sample(std::size_t k) const;
};

/// Integration grid for `sched`: every multiple of `step` inside (0, horizon)
/// plus 0, every switching time and the horizon. Multiples closer than
/// kMinInterval to a switching time are dropped, so switching times are hit exactly
/// and grids of schedules that agree up to some time coincide up to that time.
std::vector<double> simulation_grid(const Schedule& sched, double step);

/// Fixed-step RK4 under the schedule. Steps never straddle a switching time.
/// On divergence (non-finite state or norm above the bound) the trajectory is
/// truncated at the first offending sample and flagged; this is not an error.
///
/// `warm`, when given, must be a trajectory of the same system, x0 and step whose
/// schedule agrees with `sched` up to some time; its samples before that time are
/// reused verbatim, which yields the same result as a cold start.
Trajectory simulate(const SwitchedSystem& system, const Schedule& sched, const State& x0,
                    const SimOptions& options = {}, const Trajectory* warm = nullptr);

/// Largest time up to which two schedules coincide.
double agreement_time(const Schedule& a, const Schedule& b);

/// Integral-equation residual: max over samples of
/// || x(t_k) - x0 - sum_steps int f_sigma(x) ||, with each step's integral taken by
/// Simpson's rule on a grid refined 2x (midpoints from a half-step RK4 restart).
double feasibility_residual(const SwitchedSystem& system, const Trajectory& traj);

/// CSV header `t,delta_1..delta_K,omega_1..omega_K,mode`. Phases are the first
/// half of the state, speeds the second.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace gridswitch

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
#include <vector>

#include <gridswitch/schedule.hpp>
#include <gridswitch/scheduler.hpp>
#include <gridswitch/simulate.hpp>

namespace gridswitch {

struct WindowConfig {
  double horizon = 5.0;   // window length T
  double advance = 0.1;   // applied head dt
  double duration = 10.0; // total applied time D
  std::size_t iterations = 1;

  void validate() const;
  std::size_t window_count() const;
};

struct WindowRecord {
  std::size_t index = 0;
  double start = 0.0;
  double cost_before = 0.0;
  double cost_after = 0.0;
  double theta = 0.0;
  double wall_ms = 0.0;
  std::size_t steps = 0;
  bool stalled = false;
  State initial;  // inherited state x(t_i)
};

struct WindowResult {
  Schedule applied;        // over [0, D]
  Trajectory trajectory;   // applied trajectory over [0, D]
  std::vector<WindowRecord> windows;
};

/// Receding-horizon scheduling. Window i starts at i * advance from the state
/// inherited from window i - 1, runs `iterations` step()s on [0, horizon], applies
/// the head of its schedule and warm-starts the next window with the remainder
/// shifted left and its last mode held to the horizon.
WindowResult run_sliding_window(const State& x0, const SwitchedSystem& system,
                                const RunningCost& ell, const OptimizerConfig& opt,
                                const WindowConfig& win);

/// CSV `i,t_i,J_before,J_after,theta,wall_ms`.
void write_window_csv(std::ostream& out, const std::vector<WindowRecord>& windows);

/// CSV `t,ell_controlled,ell_uncontrolled` on the uncontrolled grid; controlled
/// samples are interpolated linearly in time.
void write_comparison_csv(std::ostream& out, const Trajectory& controlled,
                          const Trajectory& uncontrolled, const RunningCost& ell);

}  // namespace gridswitch

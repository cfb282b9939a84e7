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
#include <gridswitch/simulate.hpp>
#include <gridswitch/system.hpp>

namespace gridswitch {

struct OptimizerConfig {
  double alpha = 0.4;          // sufficient descent
  double beta = 0.1;           // backtracking contraction
  double lambda0 = 0.0;        // initial insertion duration; <= 0 means 0.1 * t_f
  std::size_t max_backtracks = 40;
  double min_lambda = 1e-9;    // stall once lambda falls below this
  std::size_t max_iterations = 100;
  double theta_rel_tol = 1e-3; // converged when |theta| <= rel * |theta^0| ...
  double theta_abs_tol = 0.0;  // ... or |theta| <= abs
  SimOptions sim;

  /// Throws ValidationError on out-of-range parameters.
  void validate() const;
};

enum class StepStatus { kAccepted, kConverged, kStalled };

const char* to_string(StepStatus status);

struct IterationRecord {
  std::size_t k = 0;
  double cost = 0.0;        // J^k
  double theta = 0.0;       // theta^k
  std::size_t modes = 0;    // M^k
  double lambda = 0.0;      // accepted insertion duration (0 if none)
  ModeId sigma_star = 1;
  double tau_star = 0.0;
  std::size_t backtracks = 0;
  double next_cost = 0.0;   // J of the returned schedule
  double margin = 0.0;      // best (J' - J) - alpha lambda theta seen; <= 0 when accepted
  StepStatus status = StepStatus::kConverged;
};

struct StepResult {
  Schedule schedule;
  IterationRecord record;
};

/// One insertion-descent iteration with backtracking on lambda = lambda0 beta^j.
/// Converged when theta >= -tolerance: the schedule is returned unchanged.
/// Stalled when no lambda passes the descent test; the schedule is returned
/// unchanged and the record carries the best lambda and its violation margin.
StepResult step(const Schedule& sched, const State& x0, const SwitchedSystem& system,
                const RunningCost& ell, const OptimizerConfig& opt, double tolerance = 0.0);

struct OptimizeResult {
  Schedule schedule;
  std::vector<IterationRecord> history;  // one record per iterate, final one included
  StepStatus status = StepStatus::kAccepted;  // kAccepted here means "iteration cap reached"
};

/// Repeats step() until convergence, stall or max_iterations.
OptimizeResult optimize(const Schedule& sched0, const State& x0, const SwitchedSystem& system,
                        const RunningCost& ell, const OptimizerConfig& opt);

/// CSV `k,J,theta,M,lambda,sigma_star,tau_star,backtracks`.
void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history);

}  // namespace gridswitch

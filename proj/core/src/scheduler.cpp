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

#include <gridswitch/scheduler.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <gridswitch/cost.hpp>
#include <gridswitch/csv.hpp>
#include <gridswitch/error.hpp>
#include <gridswitch/sensitivity.hpp>

namespace gridswitch {

void OptimizerConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("beta must lie in (0, 1)");
  if (!(lambda0 >= 0.0)) throw ValidationError("lambda0 must be positive (or 0 for 0.1 t_f)");
  if (!(min_lambda > 0.0)) throw ValidationError("min_lambda must be positive");
  if (!(theta_rel_tol >= 0.0) || !(theta_abs_tol >= 0.0)) {
    throw ValidationError("theta tolerances must be non-negative");
  }
  if (!(sim.step > 0.0)) throw ValidationError("integration step must be positive");
}

const char* to_string(StepStatus status) {
  switch (status) {
    case StepStatus::kAccepted:
      return "accepted";
    case StepStatus::kConverged:
      return "converged";
    case StepStatus::kStalled:
      return "stalled";
  }
  return "unknown";
}

StepResult step(const Schedule& sched, const State& x0, const SwitchedSystem& system,
                const RunningCost& ell, const OptimizerConfig& opt, double tolerance) {
  opt.validate();
  validate(sched, system.mode_count());
  const Trajectory traj = simulate(system, sched, x0, opt.sim);
  if (traj.diverged) {
    throw NumericError("schedule iterate diverges at t = " + format_number(traj.blowup_time));
  }
  const double j0 = cost(traj, ell);
  const SensitivityField field = sensitivity(traj, system, ell);

  StepResult result{sched, {}};
  IterationRecord& rec = result.record;
  rec.cost = j0;
  rec.next_cost = j0;
  rec.theta = field.minimum.theta;
  rec.modes = sched.size();
  rec.sigma_star = field.minimum.mode;
  rec.tau_star = field.minimum.time;

  if (rec.theta >= -tolerance) {
    rec.status = StepStatus::kConverged;
    return result;
  }

  double lambda = opt.lambda0 > 0.0 ? opt.lambda0 : 0.1 * sched.horizon;
  lambda = std::min(lambda, 0.5 * sched.horizon);
  double best_margin = std::numeric_limits<double>::infinity();
  double best_lambda = lambda;
  for (std::size_t j = 0; j <= opt.max_backtracks && lambda >= opt.min_lambda; ++j) {
    Schedule candidate = insert_mode(sched, rec.sigma_star, rec.tau_star, lambda);
    const Trajectory ctraj = simulate(system, candidate, x0, opt.sim, &traj);
    const double jc = cost(ctraj, ell);
    const double margin = (jc - j0) - opt.alpha * lambda * rec.theta;
    rec.backtracks = j;
    if (margin <= 0.0) {
      rec.lambda = lambda;
      rec.margin = margin;
      rec.next_cost = jc;
      rec.status = StepStatus::kAccepted;
      result.schedule = std::move(candidate);
      return result;
    }
    if (margin < best_margin) {
      best_margin = margin;
      best_lambda = lambda;
    }
    lambda *= opt.beta;
  }
  rec.lambda = best_lambda;
  rec.margin = best_margin;
  rec.status = StepStatus::kStalled;
  return result;
}

OptimizeResult optimize(const Schedule& sched0, const State& x0, const SwitchedSystem& system,
                        const RunningCost& ell, const OptimizerConfig& opt) {
  OptimizeResult result{sched0, {}, StepStatus::kAccepted};
  double tolerance = opt.theta_abs_tol;
  for (std::size_t k = 0; k <= opt.max_iterations; ++k) {
    StepResult s;
    if (k == opt.max_iterations) {
      // Final iterate: evaluate only.
      OptimizerConfig probe = opt;
      probe.min_lambda = std::numeric_limits<double>::infinity();
      s = step(result.schedule, x0, system, ell, probe, tolerance);
      if (s.record.status == StepStatus::kStalled) {
        s.record.status = StepStatus::kAccepted;
        s.record.lambda = 0.0;
        s.record.margin = 0.0;
        s.record.backtracks = 0;
      }
    } else {
      s = step(result.schedule, x0, system, ell, opt, tolerance);
    }
    s.record.k = k;
    result.history.push_back(s.record);
    if (k == 0) tolerance = std::max(opt.theta_abs_tol, opt.theta_rel_tol * std::abs(s.record.theta));
    if (s.record.status == StepStatus::kConverged || s.record.status == StepStatus::kStalled) {
      result.status = s.record.status;
      return result;
    }
    if (k == opt.max_iterations) break;
    result.schedule = std::move(s.schedule);
  }
  result.status = StepStatus::kAccepted;
  return result;
}

void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history) {
  out << "k,J,theta,M,lambda,sigma_star,tau_star,backtracks\n";
  for (const auto& r : history) {
    out << r.k << ',';
    write_number(out, r.cost);
    out << ',';
    write_number(out, r.theta);
    out << ',' << r.modes << ',';
    write_number(out, r.lambda);
    out << ',' << r.sigma_star << ',';
    write_number(out, r.tau_star);
    out << ',' << r.backtracks << '\n';
  }
}

}  // namespace gridswitch

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

#include <gridswitch/sliding_window.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include <gridswitch/cost.hpp>
#include <gridswitch/csv.hpp>
#include <gridswitch/error.hpp>

namespace gridswitch {

void WindowConfig::validate() const {
  if (!(horizon > 0.0)) throw ValidationError("window length must be positive");
  if (!(advance > 0.0 && advance < horizon)) {
    throw ValidationError("window advance must lie in (0, window length)");
  }
  if (!(duration > 0.0)) throw ValidationError("applied duration must be positive");
}

std::size_t WindowConfig::window_count() const {
  return static_cast<std::size_t>(std::ceil(duration / advance - 1e-9));
}

namespace {

// Remainder of `sched` after `shift`, re-based to 0, last mode held out to the same horizon.
Schedule shift_and_hold(const Schedule& sched, double shift) {
  Schedule rest = restrict(sched, shift, sched.horizon);
  rest.horizon = sched.horizon;
  return rest;
}

}  // namespace

WindowResult run_sliding_window(const State& x0, const SwitchedSystem& system,
                                const RunningCost& ell, const OptimizerConfig& opt,
                                const WindowConfig& win) {
  win.validate();
  opt.validate();
  const std::size_t count = win.window_count();
  const auto dim = static_cast<Eigen::Index>(system.state_dim());

  WindowResult result;
  std::vector<double> times;
  std::vector<State> states;
  std::vector<ModeId> step_modes;
  std::vector<ModeId> applied_modes;
  std::vector<double> applied_starts;

  State x = x0;
  Schedule incumbent = Schedule::constant(1, win.horizon);
  for (std::size_t i = 0; i < count; ++i) {
    const double start = static_cast<double>(i) * win.advance;
    const double head_len = std::min(win.advance, win.duration - start);
    WindowRecord rec;
    rec.index = i;
    rec.start = start;
    rec.initial = x;

    const auto clock0 = std::chrono::steady_clock::now();
    for (std::size_t it = 0; it < win.iterations; ++it) {
      StepResult res;
      try {
        res = step(incumbent, x, system, ell, opt, opt.theta_abs_tol);
      } catch (const NumericError&) {
        rec.stalled = true;
        break;
      }
      if (it == 0) rec.cost_before = res.record.cost;
      rec.theta = res.record.theta;
      rec.cost_after = res.record.next_cost;
      if (res.record.status == StepStatus::kAccepted) {
        incumbent = std::move(res.schedule);
        ++rec.steps;
      } else {
        rec.stalled = res.record.status == StepStatus::kStalled;
        break;
      }
    }
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - clock0).count();
    result.windows.push_back(rec);

    const Schedule head = restrict(incumbent, 0.0, head_len);
    const Trajectory piece = simulate(system, head, x, opt.sim);
    for (std::size_t s = 0; s < head.size(); ++s) {
      const double t = start + head.interval_start(s);
      if (applied_modes.empty() || applied_modes.back() != head.modes[s]) {
        applied_modes.push_back(head.modes[s]);
        applied_starts.push_back(t);
      }
    }
    for (std::size_t k = (i == 0 ? 0 : 1); k < piece.samples(); ++k) {
      times.push_back(start + piece.times[k]);
      states.push_back(piece.state(k));
    }
    step_modes.insert(step_modes.end(), piece.step_modes.begin(), piece.step_modes.end());
    if (piece.diverged) {
      result.trajectory.diverged = true;
      result.trajectory.blowup_time = start + piece.blowup_time;
      break;
    }
    x = piece.final_state();
    incumbent = shift_and_hold(incumbent, win.advance);
  }

  result.applied.horizon = win.duration;
  result.applied.modes = applied_modes;
  result.applied.times.assign(applied_starts.begin() + 1, applied_starts.end());
  result.applied = canonicalize(result.applied);

  Trajectory& traj = result.trajectory;
  traj.schedule = result.applied;
  traj.times = std::move(times);
  traj.step_modes = std::move(step_modes);
  traj.states.resize(dim, static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) traj.states.col(static_cast<Eigen::Index>(k)) = states[k];
  return result;
}

void write_window_csv(std::ostream& out, const std::vector<WindowRecord>& windows) {
  out << "i,t_i,J_before,J_after,theta,wall_ms\n";
  for (const auto& w : windows) {
    out << w.index << ',';
    write_number(out, w.start);
    out << ',';
    write_number(out, w.cost_before);
    out << ',';
    write_number(out, w.cost_after);
    out << ',';
    write_number(out, w.theta);
    out << ',';
    write_number(out, w.wall_ms);
    out << '\n';
  }
}

void write_comparison_csv(std::ostream& out, const Trajectory& controlled,
                          const Trajectory& uncontrolled, const RunningCost& ell) {
  if (controlled.samples() == 0 || uncontrolled.samples() == 0) {
    throw ValidationError("comparison needs two non-empty trajectories");
  }
  const Eigen::VectorXd lc = running_cost_samples(controlled, ell);
  const double end = controlled.times.back();
  out << "t,ell_controlled,ell_uncontrolled\n";
  std::size_t j = 0;
  for (std::size_t k = 0; k < uncontrolled.samples(); ++k) {
    const double t = uncontrolled.times[k];
    if (t > end) break;
    while (j + 1 < controlled.samples() && controlled.times[j + 1] < t) ++j;
    double value = lc(static_cast<Eigen::Index>(j));
    if (j + 1 < controlled.samples()) {
      const double t0 = controlled.times[j], t1 = controlled.times[j + 1];
      const double w = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
      value = (1.0 - w) * lc(static_cast<Eigen::Index>(j)) + w * lc(static_cast<Eigen::Index>(j + 1));
    }
    write_number(out, t);
    out << ',';
    write_number(out, value);
    out << ',';
    write_number(out, ell.value(uncontrolled.state(k)));
    out << '\n';
  }
}

}  // namespace gridswitch

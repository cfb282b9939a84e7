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

#include <gridswitch/simulate.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <gridswitch/csv.hpp>
#include <gridswitch/error.hpp>

namespace gridswitch {
namespace {

struct Grid {
  std::vector<double> times;
  std::vector<ModeId> modes;  // per step
};

Grid build_grid(const Schedule& sched, double step) {
  Grid g;
  g.times.push_back(0.0);
  for (std::size_t i = 0; i < sched.size(); ++i) {
    const double start = sched.interval_start(i);
    const double end = sched.interval_end(i);
    const ModeId mode = sched.modes[i];
    for (auto k = static_cast<long long>(std::floor(start / step)) + 1;; ++k) {
      const double t = static_cast<double>(k) * step;
      if (!(t < end - kMinInterval)) break;
      if (t - g.times.back() < kMinInterval) continue;
      g.times.push_back(t);
      g.modes.push_back(mode);
    }
    g.times.push_back(end);
    g.modes.push_back(mode);
  }
  return g;
}

void rk4_step(const SwitchedSystem& system, ModeId mode, double h, const State& x, State& out,
              State& k1, State& k2, State& k3, State& k4, State& tmp) {
  system.evaluate(mode, x, k1);
  tmp = x + (0.5 * h) * k1;
  system.evaluate(mode, tmp, k2);
  tmp = x + (0.5 * h) * k2;
  system.evaluate(mode, tmp, k3);
  tmp = x + h * k3;
  system.evaluate(mode, tmp, k4);
  out = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

ModeId Trajectory::mode_at_sample(std::size_t k) const {
  if (k < step_modes.size()) return step_modes[k];
  if (!step_modes.empty()) return step_modes.back();
  return schedule.modes.empty() ? 1 : schedule.modes.back();
}

std::vector<double> simulation_grid(const Schedule& sched, double step) {
  if (!(step > 0.0)) throw ValidationError("integration step must be positive");
  validate(sched);
  return build_grid(sched, step).times;
}

Trajectory simulate(const SwitchedSystem& system, const Schedule& sched, const State& x0,
                    const SimOptions& options, const Trajectory* warm) {
  if (!(options.step > 0.0)) throw ValidationError("integration step must be positive");
  validate(sched, system.mode_count());
  const auto dim = static_cast<Eigen::Index>(system.state_dim());
  if (x0.size() != dim) throw ValidationError("initial state has the wrong dimension");
  if (!x0.allFinite()) throw NumericError("non-finite initial state");

  Grid grid = build_grid(sched, options.step);
  Trajectory traj;
  traj.schedule = sched;
  traj.states.resize(dim, static_cast<Eigen::Index>(grid.times.size()));

  // Longest prefix shared with the warm trajectory: identical sample times and step modes.
  std::size_t start = 0;
  if (warm != nullptr && warm->samples() > 0 && warm->states.rows() == dim &&
      warm->states.col(0) == x0) {
    const std::size_t limit = std::min(grid.times.size(), warm->samples());
    while (start + 1 < limit && grid.times[start + 1] == warm->times[start + 1] &&
           grid.modes[start] == warm->step_modes[start]) {
      ++start;
    }
    traj.states.leftCols(static_cast<Eigen::Index>(start + 1)) =
        warm->states.leftCols(static_cast<Eigen::Index>(start + 1));
  } else {
    traj.states.col(0) = x0;
  }

  State x = traj.states.col(static_cast<Eigen::Index>(start));
  State next(dim), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  std::size_t last = grid.times.size() - 1;
  for (std::size_t k = start; k + 1 < grid.times.size(); ++k) {
    const double h = grid.times[k + 1] - grid.times[k];
    rk4_step(system, grid.modes[k], h, x, next, k1, k2, k3, k4, tmp);
    if (!next.allFinite() || next.norm() > options.divergence_bound) {
      traj.diverged = true;
      traj.blowup_time = grid.times[k + 1];
      last = k;
      break;
    }
    traj.states.col(static_cast<Eigen::Index>(k + 1)) = next;
    x.swap(next);
  }

  grid.times.resize(last + 1);
  grid.modes.resize(last);
  if (traj.diverged) traj.states.conservativeResize(dim, static_cast<Eigen::Index>(last + 1));
  traj.times = std::move(grid.times);
  traj.step_modes = std::move(grid.modes);
  return traj;
}

double agreement_time(const Schedule& a, const Schedule& b) {
  const double end = std::min(a.horizon, b.horizon);
  double t = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (true) {
    if (a.modes[i] != b.modes[j]) return t;
    const double ea = a.interval_end(i);
    const double eb = b.interval_end(j);
    t = std::min(ea, eb);
    if (t >= end) return end;
    if (ea == t) ++i;
    if (eb == t) ++j;
  }
}

double feasibility_residual(const SwitchedSystem& system, const Trajectory& traj) {
  if (traj.samples() == 0) throw ValidationError("empty trajectory");
  const auto dim = static_cast<Eigen::Index>(system.state_dim());
  const State x0 = traj.state(0);
  State integral = State::Zero(dim);
  State mid(dim), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  State fa(dim), fm(dim), fb(dim);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < traj.samples(); ++k) {
    const double h = traj.times[k + 1] - traj.times[k];
    const ModeId mode = traj.step_modes[k];
    const State xa = traj.state(k);
    const State xb = traj.state(k + 1);
    rk4_step(system, mode, 0.5 * h, xa, mid, k1, k2, k3, k4, tmp);
    system.evaluate(mode, xa, fa);
    system.evaluate(mode, mid, fm);
    system.evaluate(mode, xb, fb);
    integral += (h / 6.0) * (fa + 4.0 * fm + fb);
    worst = std::max(worst, (xb - x0 - integral).norm());
  }
  return worst;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto half = traj.states.rows() / 2;
  out << "t";
  for (Eigen::Index i = 1; i <= half; ++i) out << ",delta_" << i;
  for (Eigen::Index i = 1; i <= half; ++i) out << ",omega_" << i;
  out << ",mode\n";
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    write_number(out, traj.times[k]);
    for (Eigen::Index i = 0; i < traj.states.rows(); ++i) {
      out << ',';
      write_number(out, traj.states(i, static_cast<Eigen::Index>(k)));
    }
    out << ',' << traj.mode_at_sample(k) << '\n';
  }
}

}  // namespace gridswitch

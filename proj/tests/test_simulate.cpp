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


#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include <gridswitch/cost.hpp>
#include <gridswitch/error.hpp>
#include <gridswitch/schedule.hpp>
#include <gridswitch/simulate.hpp>

#include "support.hpp"

namespace gridswitch {
namespace {

using testing::fixture118;
using testing::HalfSquare;
using testing::ScalarDecay;
using testing::toy_modes;

// Ten times the 1e-8 integration tolerance.
constexpr double kResidualTolerance = 1e-7;

State toy_start() {
  State x(2);
  x << 0.4, -0.5;
  return x;
}

// xdot = x^2 (mode 1) or x (mode 2).
class Riccati final : public SwitchedSystem {
 public:
  std::size_t mode_count() const override { return 2; }
  std::size_t state_dim() const override { return 1; }
  void evaluate(ModeId mode, const State& x, State& dx) const override {
    dx = mode == 1 ? State(x.array().square()) : x;
  }
  void jacobian_transpose_product(ModeId mode, const State& x, const Eigen::VectorXd& v,
                                  Eigen::VectorXd& out) const override {
    out = mode == 1 ? Eigen::VectorXd(2 * x.array() * v.array()) : v;
  }
  using SwitchedSystem::evaluate;
};

TEST(Schedule, InsertExamples) {
  const Schedule base = Schedule::constant(1, 5.0);
  const Schedule mid = insert_mode(base, 2, 2.5, 0.1);
  EXPECT_EQ(mid.modes, (std::vector<ModeId>{1, 2, 1}));
  ASSERT_EQ(mid.times.size(), 2u);
  EXPECT_DOUBLE_EQ(mid.times[0], 2.45);
  EXPECT_DOUBLE_EQ(mid.times[1], 2.55);

  const Schedule edge = insert_mode(base, 2, 0.0, 0.1);
  EXPECT_EQ(edge.modes, (std::vector<ModeId>{2, 1}));
  ASSERT_EQ(edge.times.size(), 1u);
  EXPECT_DOUBLE_EQ(edge.times[0], 0.05);

  const Schedule tail = insert_mode(base, 2, 5.0, 0.1);
  EXPECT_EQ(tail.modes, (std::vector<ModeId>{1, 2}));
  EXPECT_DOUBLE_EQ(tail.times[0], 4.95);

  EXPECT_EQ(insert_mode(base, 1, 1.0, 0.3), base);
  EXPECT_EQ(insert_mode(mid, 2, 2.5, 0.05), mid);
}

TEST(Schedule, InsertRejectsBadArguments) {
  const Schedule base = Schedule::constant(1, 5.0);
  EXPECT_THROW(insert_mode(base, 2, 1.0, 0.0), ValidationError);
  EXPECT_THROW(insert_mode(base, 2, 1.0, 5.0), ValidationError);
  EXPECT_THROW(insert_mode(base, 2, 5.5, 0.1), ValidationError);
}

TEST(Schedule, InsertConvergesToOriginal) {
  const Schedule base{{1, 2, 1}, {1.0, 3.0}, 5.0};
  for (const double lambda : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const Schedule s = insert_mode(base, 2, 2.0 + 0.25, lambda);
    EXPECT_EQ(s, base);
    const Schedule t = insert_mode(base, 2, 0.5, lambda);
    ASSERT_EQ(t.times.size(), 4u);
    EXPECT_LE(std::abs(t.times[0] - 0.5), lambda);
    EXPECT_LE(std::abs(t.times[1] - 0.5), lambda);
  }
}

TEST(Schedule, Canonicalize) {
  const Schedule raw{{1, 1, 2, 1, 2}, {1.0, 2.0, 2.0 + 1e-13, 4.0}, 5.0};
  const Schedule c = canonicalize(raw);
  EXPECT_EQ(c.modes, (std::vector<ModeId>{1, 2}));
  EXPECT_EQ(c.times, (std::vector<double>{4.0}));
  EXPECT_TRUE(is_canonical(c));
  EXPECT_FALSE(is_canonical(raw));
  EXPECT_EQ(canonicalize(c), c);

  // Gaps far above the drop threshold survive.
  const Schedule fast{{1, 2, 1}, {1.0, 1.0 + 1e-8}, 5.0};
  EXPECT_EQ(canonicalize(fast), fast);
}

TEST(Schedule, Validate) {
  EXPECT_NO_THROW(validate(Schedule{{1, 2}, {0.5}, 1.0}, 2));
  EXPECT_THROW(validate(Schedule{{1, 2}, {1.0}, 1.0}), ValidationError);
  EXPECT_THROW(validate(Schedule{{1, 2, 1}, {0.6, 0.5}, 1.0}), ValidationError);
  EXPECT_THROW(validate(Schedule{{1, 2}, {}, 1.0}), ValidationError);
  EXPECT_THROW(validate(Schedule{{1, 3}, {0.5}, 1.0}, 2), ValidationError);
  EXPECT_THROW(validate(Schedule{{0}, {}, 1.0}), ValidationError);
}

TEST(Schedule, ModeAtIsRightContinuous) {
  const Schedule s{{1, 2, 1}, {1.0, 2.0}, 3.0};
  EXPECT_EQ(s.mode_at(0.0), 1);
  EXPECT_EQ(s.mode_at(1.0), 2);
  EXPECT_EQ(s.mode_at(1.999), 2);
  EXPECT_EQ(s.mode_at(2.0), 1);
  EXPECT_EQ(s.mode_at(3.0), 1);
}

TEST(Schedule, JsonRoundTrip) {
  const Schedule s{{2, 1, 2}, {0.125, 3.0000000001}, 5.0};
  EXPECT_EQ(schedule_from_json(to_json(s)), s);
  EXPECT_EQ(schedule_from_json(R"({"t_f": 2, "sigma": [1]})"), Schedule::constant(1, 2.0));
  EXPECT_THROW(schedule_from_json("{"), ParseError);
  EXPECT_THROW(schedule_from_json(R"({"t_f": 2, "sigma": [1, 2], "tau": [3]})"), ValidationError);
}

TEST(Schedule, RestrictAndConcatenate) {
  const Schedule s{{1, 2, 1}, {1.0, 2.0}, 3.0};
  const Schedule head = restrict(s, 0.0, 1.5);
  const Schedule tail = restrict(s, 1.5, 3.0);
  EXPECT_EQ(head, (Schedule{{1, 2}, {1.0}, 1.5}));
  EXPECT_EQ(tail, (Schedule{{2, 1}, {0.5}, 1.5}));
  EXPECT_EQ(concatenate(head, tail), s);
}

TEST(Simulate, GridHitsSwitchingTimes) {
  const Schedule s{{1, 2, 1}, {0.0123456, 0.0123456 + 1e-8}, 0.05};
  const auto grid = simulation_grid(s, 1e-3);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 0.05);
  for (const double t : s.times) EXPECT_NE(std::find(grid.begin(), grid.end(), t), grid.end());
  for (std::size_t k = 1; k < grid.size(); ++k) EXPECT_GT(grid[k], grid[k - 1]);
}

TEST(Simulate, EquilibriumStaysPut) {
  const auto& f = fixture118();
  const Trajectory traj = simulate(f.modes, Schedule::constant(1, 5.0), State::Zero(106));
  EXPECT_LE(traj.states.cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE(cost(traj, RegulationCost(f.config.cost)), 1e-10);
}

TEST(Simulate, GlueProperty) {
  const ModeSet modes = toy_modes();
  const double t1 = 0.7;
  const Trajectory whole = simulate(modes, Schedule{{1, 2}, {t1}, 2.0}, toy_start());
  const Trajectory first = simulate(modes, Schedule::constant(1, t1), toy_start());
  const Trajectory second = simulate(modes, Schedule::constant(2, 2.0 - t1), first.final_state());
  EXPECT_LE((whole.final_state() - second.final_state()).norm(), 1e-12);
  const auto at = std::find(whole.times.begin(), whole.times.end(), t1) - whole.times.begin();
  EXPECT_EQ(whole.state(static_cast<std::size_t>(at)), first.final_state());
}

TEST(Simulate, FinerStepOracle) {
  const ModeSet modes = toy_modes();
  const Schedule s{{1, 2}, {0.8125}, 2.0};
  const Trajectory coarse = simulate(modes, s, toy_start(), {1e-3});
  const Trajectory fine = simulate(modes, s, toy_start(), {1e-4});
  EXPECT_LE((coarse.final_state() - fine.final_state()).norm(), 1e-7);
}

TEST(Simulate, RK4OrderOnSmoothSegment) {
  const ModeSet modes = toy_modes();
  const Schedule s = Schedule::constant(2, 1.0);
  const State ref = simulate(modes, s, toy_start(), {1e-5}).final_state();
  double prev = 0.0;
  for (const double h : {0.04, 0.02, 0.01}) {
    const double err = (simulate(modes, s, toy_start(), {h}).final_state() - ref).norm();
    if (prev > 0.0) EXPECT_GE(prev / err, 8.0);
    prev = err;
  }
}

TEST(Simulate, FeasibilityResidualIsSmall) {
  const auto& f = fixture118();
  const Schedule s{{1, 2, 1, 2}, {0.4, 0.4 + 1e-8, 1.1}, 2.0};
  const Trajectory traj = simulate(f.modes, s, f.x0);
  EXPECT_LE(feasibility_residual(f.modes, traj), kResidualTolerance);
}

TEST(Simulate, DivergenceIsReportedNotThrown) {
  const Riccati sys;
  State x0(1);
  x0 << 1.0;
  const Trajectory traj = simulate(sys, Schedule::constant(1, 2.0), x0, {1e-3, 1e6});
  EXPECT_TRUE(traj.diverged);
  EXPECT_NEAR(traj.blowup_time, 1.0, 1e-2);
  EXPECT_EQ(cost(traj, HalfSquare()), std::numeric_limits<double>::infinity());

  const Trajectory tame = simulate(sys, Schedule::constant(2, 2.0), x0);
  EXPECT_FALSE(tame.diverged);
}

TEST(Simulate, WarmStartIsBitwiseIdentical) {
  const auto& f = fixture118();
  const Schedule a{{1, 2, 1}, {0.5, 0.9}, 2.0};
  const Schedule b = insert_mode(a, 2, 1.5, 0.1);
  const Trajectory ta = simulate(f.modes, a, f.x0);
  const Trajectory cold = simulate(f.modes, b, f.x0);
  const Trajectory warm = simulate(f.modes, b, f.x0, {}, &ta);
  EXPECT_EQ(agreement_time(a, b), 1.45);
  EXPECT_EQ(cold.times, warm.times);
  EXPECT_EQ(cold.states, warm.states);
}

TEST(Simulate, TrajectoryCsvHeader) {
  const ModeSet modes = toy_modes();
  const Trajectory traj = simulate(modes, Schedule{{1, 2}, {0.01}, 0.02}, toy_start(), {0.01});
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,delta_1,omega_1,mode");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Cost, RunningCostExamples) {
  const CostConfig cfg;
  Eigen::VectorXd phases(3), speeds = Eigen::VectorXd::Zero(3);
  phases << 0.1, -0.1, 0.0;
  EXPECT_DOUBLE_EQ(running_cost_full(phases, speeds, cfg), 0.5 * (0.01 + 0.01));
  phases.setConstant(0.42);
  EXPECT_DOUBLE_EQ(running_cost_full(phases, speeds, cfg), 0.0);

  Eigen::VectorXd p(4), w(4);
  p << 0.3, -0.2, 0.05, 0.0;
  w << 1.0, -2.0, 0.5, 0.25;
  const double base = running_cost_full(p, w, cfg);
  EXPECT_NEAR(running_cost_full((p.array() + 1.3).matrix(), w, cfg), base, 1e-14);
  const double spread = (p.array() - p.mean()).square().sum();
  EXPECT_NEAR(base, 0.5 * spread + w.squaredNorm() / 40.0, 1e-15);
}

TEST(Cost, StateCostIncludesReference) {
  // Reduced state (delta_1, delta_2, omega_1, omega_2); reference sits at phase 0.
  State x(4);
  x << 0.3, 0.6, 1.0, 2.0;
  Eigen::VectorXd phases(3), speeds(2);
  phases << 0.3, 0.6, 0.0;
  speeds << 1.0, 2.0;
  const CostConfig cfg;
  EXPECT_DOUBLE_EQ(running_cost(x, cfg), running_cost_full(phases, speeds, cfg));

  const RegulationCost ell(cfg);
  Eigen::VectorXd grad(4);
  ell.gradient(x, grad);
  for (int k = 0; k < 4; ++k) {
    State xp = x, xm = x;
    xp(k) += 1e-6;
    xm(k) -= 1e-6;
    EXPECT_NEAR(grad(k), (ell.value(xp) - ell.value(xm)) / 2e-6, 1e-8);
  }
}

TEST(Cost, ConstantRunningCostIntegratesExactly) {
  class Constant final : public RunningCost {
   public:
    double value(const State&) const override { return 0.37; }
    void gradient(const State&, Eigen::VectorXd& g) const override { g.setZero(); }
  };
  const ModeSet modes = toy_modes();
  const Trajectory traj = simulate(modes, Schedule{{1, 2}, {1.2345}, 5.0}, toy_start());
  EXPECT_NEAR(cost(traj, Constant()), 5 * 0.37, 1e-12);
}

TEST(Cost, TrapezoidAgreesWithFineSimpson) {
  const ModeSet modes = toy_modes();
  const RegulationCost ell;
  const Schedule s{{1, 2}, {0.75}, 1.5};
  const Trajectory traj = simulate(modes, s, toy_start());
  const double j = cost(traj, ell);

  // Composite Simpson on each mode interval at 10x resolution.
  double oracle = 0.0;
  State x = toy_start();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Schedule piece = Schedule::constant(s.modes[i], s.interval_end(i) - s.interval_start(i));
    const Trajectory t = simulate(modes, piece, x, {1e-4});
    const std::size_t n = t.samples() - 1;
    ASSERT_EQ(n % 2, 0u);
    const double h = t.times[1] - t.times[0];
    double sum = ell.value(t.state(0)) + ell.value(t.state(n));
    for (std::size_t k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * ell.value(t.state(k));
    oracle += sum * h / 3.0;
    x = t.final_state();
  }
  EXPECT_LE(testing::rel_diff(j, oracle), 1e-6);
}

TEST(Cost, EmptyTrajectoryThrows) {
  EXPECT_THROW(cost(Trajectory{}, HalfSquare()), ValidationError);
}

TEST(Cost, NonNegative) {
  const auto& f = fixture118();
  const Trajectory traj = simulate(f.modes, Schedule{{2, 1}, {0.3}, 1.0}, f.x0);
  const Eigen::VectorXd ell = running_cost_samples(traj, RegulationCost(f.config.cost));
  EXPECT_GE(ell.minCoeff(), 0.0);
  EXPECT_GT(cost(traj, RegulationCost(f.config.cost)), 0.0);
}

}  // namespace
}  // namespace gridswitch

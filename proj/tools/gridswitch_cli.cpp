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


// gridswitch: command-line driver for the switched-capacitor experiments.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <gridswitch/config.hpp>
#include <gridswitch/cost.hpp>
#include <gridswitch/csv.hpp>
#include <gridswitch/design.hpp>
#include <gridswitch/dynamics.hpp>
#include <gridswitch/error.hpp>
#include <gridswitch/scheduler.hpp>
#include <gridswitch/sensitivity.hpp>
#include <gridswitch/simulate.hpp>
#include <gridswitch/sliding_window.hpp>

namespace fs = std::filesystem;
using namespace gridswitch;

namespace {

struct Globals {
  std::string case_path = std::string(GRIDSWITCH_DATA_DIR) + "/ieee118.cdf";
  std::string placement_path = std::string(GRIDSWITCH_DATA_DIR) + "/placement118.txt";
  std::string config_path = std::string(GRIDSWITCH_DATA_DIR) + "/dynparams.json";
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> range;
  std::optional<double> step;
  std::size_t jobs = 1;
  bool no_timestamp = false;
};

// Values a subcommand flag may override in the loaded config.
struct Overrides {
  std::optional<double> horizon;
  std::optional<std::size_t> iterations;
  std::optional<double> alpha, beta, lambda0;
};

struct Context {
  CaseData data;
  ExperimentConfig config;
};

Context load(const Globals& g, const Overrides& o) {
  Context ctx;
  ctx.config = read_config_file(g.config_path);
  if (g.seed) ctx.config.disturbance.seed = *g.seed;
  if (g.range) ctx.config.disturbance.range = *g.range;
  if (g.step) ctx.config.optimizer.sim.step = *g.step;
  if (o.horizon) ctx.config.horizon = *o.horizon;
  if (o.iterations) ctx.config.optimizer.max_iterations = *o.iterations;
  if (o.alpha) ctx.config.optimizer.alpha = *o.alpha;
  if (o.beta) ctx.config.optimizer.beta = *o.beta;
  if (o.lambda0) ctx.config.optimizer.lambda0 = *o.lambda0;
  ctx.config.optimizer.validate();
  if (!(ctx.config.horizon > 0.0)) throw ValidationError("horizon must be positive");
  ctx.data = read_case_file(g.case_path);
  return ctx;
}

ModeSet load_modes(const Globals& g, const Context& ctx) {
  return build_modes(ctx.data, read_placement_file(g.placement_path), ctx.config.dynamics);
}

State disturbance(const ModeSet& modes, const ExperimentConfig& cfg) {
  return perturb(State::Zero(static_cast<Eigen::Index>(modes.state_dim())), cfg.disturbance.range,
                 cfg.disturbance.seed);
}

std::ofstream open_output(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  const fs::path path = fs::path(g.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// key = value lines, echoed to stdout and written to summary.txt.
class Summary {
 public:
  Summary(const Globals& g, const std::string& command) : g_(g) {
    if (!g.no_timestamp) text_ << "# gridswitch " << command << ' ' << utc_now() << '\n';
  }
  template <typename T>
  void add(const std::string& key, const T& value) {
    text_ << key << " = " << value << '\n';
  }
  void number(const std::string& key, double value) { add(key, format_number(value)); }
  void write(const std::string& name = "summary.txt") {
    auto out = open_output(g_, name);
    out << text_.str();
    std::cout << text_.str();
  }

 private:
  const Globals& g_;
  std::ostringstream text_;
};

int cmd_simulate(const Globals& g, const Overrides& o, const std::string& schedule_path,
                 const std::string& x0_kind) {
  const Context ctx = load(g, o);
  const ModeSet modes = load_modes(g, ctx);
  const Schedule sched = schedule_path.empty() ? Schedule::constant(1, ctx.config.horizon)
                                               : read_schedule_file(schedule_path);
  validate(sched, modes.mode_count());
  State x0;
  if (x0_kind == "zero") {
    x0 = State::Zero(static_cast<Eigen::Index>(modes.state_dim()));
  } else {
    x0 = disturbance(modes, ctx.config);
  }
  const RegulationCost ell(ctx.config.cost);
  const Trajectory traj = simulate(modes, sched, x0, ctx.config.optimizer.sim);
  {
    auto out = open_output(g, "trajectory.csv");
    write_trajectory_csv(out, traj);
  }
  const Eigen::VectorXd l = running_cost_samples(traj, ell);
  Summary s(g, "simulate");
  s.number("J", cost(traj, ell));
  s.number("t_f", sched.horizon);
  s.add("M", sched.size());
  s.add("diverged", traj.diverged ? "true" : "false");
  if (traj.diverged) s.number("blowup_time", traj.blowup_time);
  s.number("ell_initial", l(0));
  s.number("ell_final", l(l.size() - 1));
  s.number("ell_max", l.maxCoeff());
  s.number("feasibility_residual", feasibility_residual(modes, traj));
  s.write();
  return 0;
}

int cmd_schedule(const Globals& g, const Overrides& o) {
  const Context ctx = load(g, o);
  const ModeSet modes = load_modes(g, ctx);
  const State x0 = disturbance(modes, ctx.config);
  const RegulationCost ell(ctx.config.cost);
  const OptimizeResult r =
      optimize(Schedule::constant(1, ctx.config.horizon), x0, modes, ell, ctx.config.optimizer);
  {
    auto out = open_output(g, "schedule.json");
    out << to_json(r.schedule);
  }
  {
    auto out = open_output(g, "history.csv");
    write_history_csv(out, r.history);
  }
  const auto& first = r.history.front();
  const auto& last = r.history.back();
  Summary s(g, "schedule");
  s.add("iterations", r.history.size() - 1);
  s.add("status", to_string(r.status));
  s.number("J_initial", first.cost);
  s.number("J_final", last.cost);
  s.number("theta_initial", first.theta);
  s.number("theta_final", last.theta);
  s.add("M_final", last.modes);
  s.write();
  return 0;
}

int cmd_window(const Globals& g, const Overrides& o, const std::optional<double>& length, const std::optional<double>& advance,
               const std::optional<double>& duration, const std::optional<std::size_t>& per) {
  Context ctx = load(g, o);
  WindowConfig& win = ctx.config.window;
  if (length) win.horizon = *length;
  if (advance) win.advance = *advance;
  if (duration) win.duration = *duration;
  if (per) win.iterations = *per;
  win.validate();
  const ModeSet modes = load_modes(g, ctx);
  const State x0 = disturbance(modes, ctx.config);
  const RegulationCost ell(ctx.config.cost);

  WindowResult r = run_sliding_window(x0, modes, ell, ctx.config.optimizer, win);
  const Trajectory free =
      simulate(modes, Schedule::constant(1, win.duration), x0, ctx.config.optimizer.sim);
  if (g.no_timestamp) {
    for (auto& w : r.windows) w.wall_ms = 0.0;
  }
  {
    auto out = open_output(g, "applied_schedule.json");
    out << to_json(r.applied);
  }
  {
    auto out = open_output(g, "comparison.csv");
    write_comparison_csv(out, r.trajectory, free, ell);
  }
  {
    auto out = open_output(g, "windows.csv");
    write_window_csv(out, r.windows);
  }
  double wall_max = 0.0, wall_sum = 0.0;
  std::size_t stalls = 0;
  for (const auto& w : r.windows) {
    wall_max = std::max(wall_max, w.wall_ms);
    wall_sum += w.wall_ms;
    stalls += w.stalled;
  }
  const Eigen::VectorXd lc = running_cost_samples(r.trajectory, ell);
  const Eigen::VectorXd lu = running_cost_samples(free, ell);
  Summary s(g, "window");
  s.add("windows", r.windows.size());
  s.add("stalled_windows", stalls);
  s.add("applied_switches", r.applied.times.size());
  s.number("J_controlled", cost(r.trajectory, ell));
  s.number("J_uncontrolled", cost(free, ell));
  s.number("ell_end_controlled", lc(lc.size() - 1));
  s.number("ell_end_uncontrolled", lu(lu.size() - 1));
  s.add("diverged_controlled", r.trajectory.diverged ? "true" : "false");
  s.add("diverged_uncontrolled", free.diverged ? "true" : "false");
  s.number("wall_ms_mean", r.windows.empty() ? 0.0 : wall_sum / static_cast<double>(r.windows.size()));
  s.number("wall_ms_max", wall_max);
  s.write();
  return 0;
}

int cmd_design(const Globals& g, const Overrides& o, SweepConfig sweep_cfg) {
  const Context ctx = load(g, o);
  sweep_cfg.jobs = g.jobs;
  sweep_cfg.horizon = ctx.config.horizon;
  const std::size_t dim = 2 * (ctx.data.generators.size() - 1);
  const State x0 = perturb(State::Zero(static_cast<Eigen::Index>(dim)),
                           ctx.config.disturbance.range, ctx.config.disturbance.seed);
  const SweepResult r =
      sweep(ctx.data, ctx.config.dynamics, ctx.config.cost, ctx.config.optimizer, x0, sweep_cfg);
  {
    auto out = open_output(g, "sweep.csv");
    write_sweep_csv(out, r.records);
  }
  for (const auto& rec : r.records) {
    auto out = open_output(g, "placements/design_" + std::to_string(rec.id) + ".txt");
    out << "# design " << rec.id << ", seed " << rec.seed << '\n';
    write_placement(out, rec.placement);
  }
  Summary s(g, "design");
  s.add("designs", r.records.size());
  if (r.partial) {
    s.add("warning", "only " + std::to_string(r.records.size()) + " distinct placements of " +
                         std::to_string(sweep_cfg.designs) + " requested");
  }
  if (sweep_cfg.with_optimal) {
    std::size_t pairs = 0;
    for (const auto& rec : r.records) pairs += rec.optimal_cost.has_value();
    s.add("pairs", pairs);
    if (pairs >= 3) {
      const Correlation c = correlate(r.records);
      s.number("spearman", c.coefficient);
    } else {
      s.add("spearman", "n/a (fewer than 3 optimized designs)");
    }
  }
  s.write("correlation.txt");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Switched-capacitor scheduling on multimachine power networks"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  Overrides o;
  app.add_option("--case", g.case_path, "Case file (IEEE CDF or native)")->capture_default_str();
  app.add_option("--placement", g.placement_path, "Switched-line placement file")
      ->capture_default_str();
  app.add_option("--config", g.config_path, "JSON experiment configuration")->capture_default_str();
  app.add_option("--seed", g.seed, "Disturbance seed (overrides config)");
  app.add_option("--range", g.range, "Disturbance half-width in rad (overrides config)");
  app.add_option("--step", g.step, "Integration step in s (overrides config)");
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Parallel workers for design sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--no-timestamp", g.no_timestamp,
               "Omit timestamp lines and wall-clock values so reruns are byte-identical");

  auto* sim = app.add_subcommand("simulate", "Simulate a schedule, write trajectory and cost");
  std::string schedule_path, x0_kind = "perturbed";
  sim->add_option("--schedule", schedule_path, "Schedule JSON (default: mode 1 throughout)");
  sim->add_option("--x0", x0_kind, "Initial state")
      ->check(CLI::IsMember({"zero", "perturbed"}))
      ->capture_default_str();
  sim->add_option("--horizon", o.horizon, "t_f in s when no schedule is given");

  auto* sch = app.add_subcommand("schedule", "Optimize a switching schedule from the disturbance");
  sch->add_option("--horizon", o.horizon, "t_f in s");
  sch->add_option("--iterations", o.iterations, "Maximum optimizer iterations");
  sch->add_option("--alpha", o.alpha, "Sufficient-descent parameter");
  sch->add_option("--beta", o.beta, "Backtracking contraction");
  sch->add_option("--lambda0", o.lambda0, "Initial insertion duration in s");

  auto* win = app.add_subcommand("window", "Receding-horizon control against the free response");
  std::optional<double> length, advance, duration;
  std::optional<std::size_t> per;
  win->add_option("--window", length, "Window length T in s");
  win->add_option("--advance", advance, "Applied head dt in s");
  win->add_option("--duration", duration, "Total applied time D in s");
  win->add_option("--per-window", per, "Optimizer iterations per window");

  auto* des = app.add_subcommand("design", "Random placement sweep with sensitivity scores");
  SweepConfig sweep_cfg;
  des->add_option("--designs", sweep_cfg.designs, "Number of distinct placements")
      ->capture_default_str();
  des->add_option("--design-seed", sweep_cfg.seed, "First placement seed")->capture_default_str();
  des->add_flag("--with-optimal", sweep_cfg.with_optimal, "Also optimize each design for J*");
  des->add_option("--iterations", o.iterations, "Optimizer iteration cap per design");
  des->add_option("--horizon", o.horizon, "t_f in s");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(g, o, schedule_path, x0_kind);
    if (*sch) return cmd_schedule(g, o);
    if (*win) return cmd_window(g, o, length, advance, duration, per);
    if (*des) return cmd_design(g, o, sweep_cfg);
  } catch (const std::exception& e) {
    std::cerr << "gridswitch: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

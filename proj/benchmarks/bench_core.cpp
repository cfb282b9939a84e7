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


#include <benchmark/benchmark.h>

#include <gridswitch/admittance.hpp>
#include <gridswitch/config.hpp>
#include <gridswitch/cost.hpp>
#include <gridswitch/dynamics.hpp>
#include <gridswitch/scheduler.hpp>
#include <gridswitch/sensitivity.hpp>
#include <gridswitch/simulate.hpp>

using namespace gridswitch;

namespace {

struct Setup {
  CaseData data = read_case_file(GRIDSWITCH_DATA_DIR "/ieee118.cdf");
  Placement placement = read_placement_file(GRIDSWITCH_DATA_DIR "/placement118.txt");
  ExperimentConfig config = read_config_file(GRIDSWITCH_DATA_DIR "/dynparams.json");
  ModeSet modes = build_modes(data, placement, config.dynamics);
  State x0 = perturb(State::Zero(106), 0.3, 1);
};

const Setup& setup() {
  static const Setup s;
  return s;
}

void BM_BuildModes(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state) benchmark::DoNotOptimize(build_modes(s.data, s.placement, s.config.dynamics));
}
BENCHMARK(BM_BuildModes)->Unit(benchmark::kMillisecond);

void BM_VectorField(benchmark::State& state) {
  const auto& s = setup();
  State dx(106);
  for (auto _ : state) {
    s.modes.evaluate(2, s.x0, dx);
    benchmark::DoNotOptimize(dx.data());
  }
}
BENCHMARK(BM_VectorField);

void BM_JacobianTransposeProduct(benchmark::State& state) {
  const auto& s = setup();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(106), out(106);
  for (auto _ : state) {
    s.modes.jacobian_transpose_product(2, s.x0, v, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_JacobianTransposeProduct);

void BM_DenseJacobian(benchmark::State& state) {
  const auto& s = setup();
  for (auto _ : state) benchmark::DoNotOptimize(dynamics_jacobian(s.modes, 2, s.x0));
}
BENCHMARK(BM_DenseJacobian);

void BM_Simulate(benchmark::State& state) {
  const auto& s = setup();
  const Schedule sched{{1, 2, 1}, {0.3, 0.7}, static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(s.modes, sched, s.x0));
}
BENCHMARK(BM_Simulate)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Sensitivity(benchmark::State& state) {
  const auto& s = setup();
  const Trajectory traj = simulate(s.modes, Schedule::constant(1, 5.0), s.x0);
  const RegulationCost ell(s.config.cost);
  for (auto _ : state) benchmark::DoNotOptimize(sensitivity(traj, s.modes, ell));
}
BENCHMARK(BM_Sensitivity)->Unit(benchmark::kMillisecond);

void BM_OptimizerStep(benchmark::State& state) {
  const auto& s = setup();
  const RegulationCost ell(s.config.cost);
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(Schedule::constant(1, 5.0), s.x0, s.modes, ell, s.config.optimizer));
  }
}
BENCHMARK(BM_OptimizerStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

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

#include <gridswitch/design.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <thread>

#include <gridswitch/csv.hpp>
#include <gridswitch/error.hpp>
#include <gridswitch/sensitivity.hpp>
#include <gridswitch/simulate.hpp>

namespace gridswitch {

Placement random_placement(const CaseData& data, std::uint64_t seed, CoverageRule rule) {
  const auto neighbors = branch_generator_neighbors(data, rule);
  const std::size_t gens = data.generators.size();
  std::vector<bool> reachable(gens, false);
  for (const auto& n : neighbors) {
    for (const auto g : n) reachable[g] = true;
  }
  for (std::size_t g = 0; g < gens; ++g) {
    if (!reachable[g]) {
      throw ValidationError("infeasible coverage: generator at bus " +
                            std::to_string(data.generators[g].bus) +
                            " has no eligible branch to another generator");
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<bool> covered(gens, false);
  std::vector<bool> placed(neighbors.size(), false);
  std::size_t remaining = gens;
  Placement placement;
  std::vector<std::size_t> candidates;
  while (remaining > 0) {
    candidates.clear();
    for (std::size_t k = 0; k < neighbors.size(); ++k) {
      if (placed[k]) continue;
      if (std::any_of(neighbors[k].begin(), neighbors[k].end(),
                      [&](std::size_t g) { return !covered[g]; })) {
        candidates.push_back(k);
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const std::size_t line = candidates[pick(rng)];
    placed[line] = true;
    placement.lines.push_back(line);
    for (const auto g : neighbors[line]) {
      if (!covered[g]) {
        covered[g] = true;
        --remaining;
      }
    }
  }
  std::sort(placement.lines.begin(), placement.lines.end());
  return placement;
}

DesignScore evaluate_design(const Placement& placement, const CaseData& data,
                            const DynamicParams& params, const CostConfig& cost_config,
                            const State& x0, double horizon, const SimOptions& sim) {
  const ModeSet modes = build_modes(data, placement, params);
  const RegulationCost ell(cost_config);
  const Trajectory traj = simulate(modes, Schedule::constant(1, horizon), x0, sim);
  if (traj.diverged) return {0.0, true};
  return {sensitivity(traj, modes, ell).minimum.theta, false};
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

SweepResult sweep(const CaseData& data, const DynamicParams& params, const CostConfig& cost_config,
                  const OptimizerConfig& opt, const State& x0, const SweepConfig& config) {
  SweepResult result;
  std::set<std::vector<std::size_t>> seen;
  std::uint64_t cursor = config.seed;
  for (std::size_t id = 0; id < config.designs; ++id) {
    bool found = false;
    for (std::size_t attempt = 0; attempt < config.max_draws_per_design; ++attempt) {
      const std::uint64_t seed = cursor++;
      Placement p = random_placement(data, seed, params.coverage);
      if (seen.insert(p.lines).second) {
        result.records.push_back({id, seed, std::move(p), {}, std::nullopt});
        found = true;
        break;
      }
    }
    if (!found) {
      result.partial = true;
      break;
    }
  }

  const RegulationCost ell(cost_config);
  parallel_for(result.records.size(), config.jobs, [&](std::size_t i) {
    DesignRecord& rec = result.records[i];
    rec.score = evaluate_design(rec.placement, data, params, cost_config, x0, config.horizon, opt.sim);
    if (config.with_optimal && !rec.score.diverged) {
      const ModeSet modes = build_modes(data, rec.placement, params);
      const auto run = optimize(Schedule::constant(1, config.horizon), x0, modes, ell, opt);
      rec.optimal_cost = run.history.back().cost;
    }
  });
  return result;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("rank correlation needs paired samples");
  if (a.size() < 2) throw ValidationError("rank correlation needs at least two pairs");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

Correlation correlate(const std::vector<DesignRecord>& records) {
  Correlation c;
  for (const auto& r : records) {
    if (r.score.diverged || !r.optimal_cost) continue;
    c.theta0.push_back(r.score.theta0);
    c.optimal_cost.push_back(*r.optimal_cost);
  }
  if (c.theta0.size() < 3) throw ValidationError("correlation needs at least 3 scored designs");
  c.coefficient = spearman(c.theta0, c.optimal_cost);
  return c;
}

void write_sweep_csv(std::ostream& out, const std::vector<DesignRecord>& records) {
  out << "design_id,seed,n_lines,theta0,J_star\n";
  for (const auto& r : records) {
    out << r.id << ',' << r.seed << ',' << r.placement.lines.size() << ',';
    if (r.score.diverged) {
      out << "divergent";
    } else {
      write_number(out, r.score.theta0);
    }
    out << ',';
    if (r.optimal_cost) write_number(out, *r.optimal_cost);
    out << '\n';
  }
}

}  // namespace gridswitch

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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <gridswitch/case_data.hpp>
#include <gridswitch/cost.hpp>
#include <gridswitch/coverage.hpp>
#include <gridswitch/modes.hpp>
#include <gridswitch/scheduler.hpp>

namespace gridswitch {

/// Repeatedly draws, uniformly among eligible unplaced branches that serve at
/// least one uncovered generator, until every generator is covered. Throws
/// ValidationError when some generator cannot be covered under `rule`.
Placement random_placement(const CaseData& data, std::uint64_t seed,
                           CoverageRule rule = CoverageRule::kZone);

struct DesignScore {
  double theta0 = 0.0;
  bool diverged = false;
};

/// theta of the no-switch schedule ([1], {}) on [0, horizon] from x0.
DesignScore evaluate_design(const Placement& placement, const CaseData& data,
                            const DynamicParams& params, const CostConfig& cost, const State& x0,
                            double horizon, const SimOptions& sim = {});

struct DesignRecord {
  std::size_t id = 0;
  std::uint64_t seed = 0;
  Placement placement;
  DesignScore score;
  std::optional<double> optimal_cost;
};

struct SweepConfig {
  std::size_t designs = 20;
  std::uint64_t seed = 0;
  bool with_optimal = false;
  double horizon = 5.0;
  std::size_t jobs = 1;
  std::size_t max_draws_per_design = 50;
};

struct SweepResult {
  std::vector<DesignRecord> records;
  bool partial = false;
};

/// Distinct placements drawn from seeds seed, seed+1, ...; each scored from the
/// shared disturbance x0, optionally optimized for J*.
SweepResult sweep(const CaseData& data, const DynamicParams& params, const CostConfig& cost,
                  const OptimizerConfig& opt, const State& x0, const SweepConfig& config);

/// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> a, std::span<const double> b);

struct Correlation {
  std::vector<double> theta0;
  std::vector<double> optimal_cost;
  double coefficient = 0.0;
};

/// Pairs (theta0, J*) of records carrying J*. Throws ValidationError for
/// fewer than 3 pairs.
Correlation correlate(const std::vector<DesignRecord>& records);

/// CSV `design_id,seed,n_lines,theta0,J_star` (J_star empty when absent).
void write_sweep_csv(std::ostream& out, const std::vector<DesignRecord>& records);

}  // namespace gridswitch

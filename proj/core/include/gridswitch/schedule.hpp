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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <gridswitch/system.hpp>

namespace gridswitch {

/// Intervals shorter than this are dropped by canonicalize().
inline constexpr double kMinInterval = 1e-12;

/// Mode sequence `modes` (sigma_1..sigma_M) with switching times `times`
/// (T_1..T_{M-1}) over [0, horizon]. Mode i is active on [T_{i-1}, T_i).
struct Schedule {
  std::vector<ModeId> modes;
  std::vector<double> times;
  double horizon = 0.0;

  /// Single-mode schedule.
  static Schedule constant(ModeId mode, double horizon);

  std::size_t size() const { return modes.size(); }
  double interval_start(std::size_t i) const { return i == 0 ? 0.0 : times[i - 1]; }
  double interval_end(std::size_t i) const { return i + 1 == modes.size() ? horizon : times[i]; }
  /// Active mode at t, right-continuous at switching times.
  ModeId mode_at(double t) const;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Throws ValidationError unless 0 < T_1 < ... < T_{M-1} < horizon,
/// |times| = M - 1 and every mode lies in [1, mode_count] (mode_count 0 skips that check).
void validate(const Schedule& sched, std::size_t mode_count = 0);

/// Drops intervals shorter than kMinInterval and merges equal neighbours.
Schedule canonicalize(Schedule sched);

bool is_canonical(const Schedule& sched);

/// Inserts `mode` over [tau - lambda/2, tau + lambda/2] clipped to [0, horizon],
/// then canonicalizes. Throws ValidationError if lambda <= 0, lambda >= horizon
/// or tau lies outside [0, horizon].
Schedule insert_mode(const Schedule& sched, ModeId mode, double tau, double lambda);

/// The part of `sched` on [from, to], re-based so that `from` maps to 0.
Schedule restrict(const Schedule& sched, double from, double to);

/// Appends `tail` (starting at time 0) after `head`; the result spans
/// head.horizon + tail.horizon and is canonical when both inputs are.
Schedule concatenate(const Schedule& head, const Schedule& tail);

/// {"t_f": ..., "sigma": [...], "tau": [...]}
std::string to_json(const Schedule& sched);
Schedule schedule_from_json(std::string_view text);
Schedule read_schedule_file(const std::filesystem::path& path);

}  // namespace gridswitch

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

#include <gridswitch/schedule.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <gridswitch/error.hpp>

namespace gridswitch {
namespace {

struct Interval {
  double start;
  double end;
  ModeId mode;
};

std::vector<Interval> intervals_of(const Schedule& s) {
  if (s.modes.empty()) throw ValidationError("schedule has no modes");
  if (s.times.size() + 1 != s.modes.size()) {
    throw ValidationError("schedule needs exactly one switching time fewer than modes");
  }
  std::vector<Interval> out;
  out.reserve(s.modes.size());
  for (std::size_t i = 0; i < s.modes.size(); ++i) {
    out.push_back({s.interval_start(i), s.interval_end(i), s.modes[i]});
  }
  return out;
}

Schedule from_intervals(const std::vector<Interval>& parts, double horizon) {
  Schedule s;
  s.horizon = horizon;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) s.times.push_back(parts[i].start);
    s.modes.push_back(parts[i].mode);
  }
  return s;
}

}  // namespace

Schedule Schedule::constant(ModeId mode, double horizon) { return Schedule{{mode}, {}, horizon}; }

ModeId Schedule::mode_at(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  return modes[static_cast<std::size_t>(it - times.begin())];
}

void validate(const Schedule& sched, std::size_t mode_count) {
  if (!(sched.horizon > 0.0) || !std::isfinite(sched.horizon)) {
    throw ValidationError("schedule horizon must be positive and finite");
  }
  intervals_of(sched);
  double prev = 0.0;
  for (const double t : sched.times) {
    if (!(t > prev)) throw ValidationError("switching times must increase strictly from 0");
    prev = t;
  }
  if (!sched.times.empty() && !(sched.times.back() < sched.horizon)) {
    throw ValidationError("switching times must lie before the horizon");
  }
  for (const ModeId m : sched.modes) {
    if (m < 1 || (mode_count > 0 && static_cast<std::size_t>(m) > mode_count)) {
      throw ValidationError("mode " + std::to_string(m) + " out of range");
    }
  }
}

Schedule canonicalize(Schedule sched) {
  const auto parts = intervals_of(sched);
  std::vector<Interval> kept;
  for (const auto& p : parts) {
    if (p.end - p.start >= kMinInterval) kept.push_back(p);
  }
  if (kept.empty()) {
    kept.push_back(*std::max_element(parts.begin(), parts.end(), [](const auto& a, const auto& b) {
      return a.end - a.start < b.end - b.start;
    }));
  }
  std::vector<Interval> merged;
  for (const auto& p : kept) {
    if (!merged.empty() && merged.back().mode == p.mode) continue;
    merged.push_back(p);
  }
  return from_intervals(merged, sched.horizon);
}

bool is_canonical(const Schedule& sched) {
  const auto parts = intervals_of(sched);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].end - parts[i].start < kMinInterval) return false;
    if (i > 0 && parts[i].mode == parts[i - 1].mode) return false;
  }
  return true;
}

Schedule insert_mode(const Schedule& sched, ModeId mode, double tau, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("insertion duration must be positive");
  if (!(lambda < sched.horizon)) throw ValidationError("insertion duration must be below t_f");
  if (!(tau >= 0.0 && tau <= sched.horizon)) throw ValidationError("insertion time outside [0, t_f]");
  const double a = std::max(0.0, tau - lambda / 2.0);
  const double b = std::min(sched.horizon, tau + lambda / 2.0);

  std::vector<Interval> out;
  bool inserted = false;
  for (const auto& p : intervals_of(sched)) {
    if (p.start < a) out.push_back({p.start, std::min(p.end, a), p.mode});
    if (!inserted && p.end > a) {
      out.push_back({a, b, mode});
      inserted = true;
    }
    if (p.end > b) out.push_back({std::max(p.start, b), p.end, p.mode});
  }
  if (!inserted) out.push_back({a, b, mode});
  return canonicalize(from_intervals(out, sched.horizon));
}

Schedule restrict(const Schedule& sched, double from, double to) {
  if (!(from >= 0.0 && to > from && to <= sched.horizon)) {
    throw ValidationError("restriction window outside the schedule");
  }
  std::vector<Interval> out;
  for (const auto& p : intervals_of(sched)) {
    const double s = std::max(p.start, from);
    const double e = std::min(p.end, to);
    if (e > s) out.push_back({s - from, e - from, p.mode});
  }
  return canonicalize(from_intervals(out, to - from));
}

Schedule concatenate(const Schedule& head, const Schedule& tail) {
  Schedule out = head;
  out.times.push_back(head.horizon);
  for (const double t : tail.times) out.times.push_back(head.horizon + t);
  out.modes.insert(out.modes.end(), tail.modes.begin(), tail.modes.end());
  out.horizon = head.horizon + tail.horizon;
  return canonicalize(std::move(out));
}

std::string to_json(const Schedule& sched) {
  nlohmann::ordered_json doc;
  doc["t_f"] = sched.horizon;
  doc["sigma"] = sched.modes;
  doc["tau"] = sched.times;
  return doc.dump(2) + "\n";
}

Schedule schedule_from_json(std::string_view text) {
  Schedule s;
  try {
    const auto doc = nlohmann::json::parse(text);
    s.horizon = doc.at("t_f").get<double>();
    s.modes = doc.at("sigma").get<std::vector<ModeId>>();
    s.times = doc.value("tau", std::vector<double>{});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schedule: ") + e.what(), 0);
  }
  validate(s);
  return s;
}

Schedule read_schedule_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return schedule_from_json(ss.str());
  } catch (const ParseError& e) {
    throw e.in(path.string());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace gridswitch

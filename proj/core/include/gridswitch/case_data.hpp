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
#include <iosfwd>
#include <string_view>
#include <vector>

namespace gridswitch {

enum class BusType { kLoad, kGenerator, kSlack };

/// Bus record. Loads and shunts are in per-unit on the case base.
struct Bus {
  int id = 0;
  BusType type = BusType::kLoad;
  double load_p = 0.0;
  double load_q = 0.0;
  double shunt_g = 0.0;
  double shunt_b = 0.0;
  double voltage = 1.0;
};

/// Pi-model branch. A tap of 0 means "no transformer" and is treated as 1.
struct Branch {
  int from = 0;
  int to = 0;
  double r = 0.0;
  double x = 0.0;
  double b = 0.0;
  double tap = 0.0;
};

struct Generator {
  int bus = 0;
  double p_out = 0.0;  // per-unit
};

struct CaseData {
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  double base_mva = 100.0;
  std::size_t ignored_records = 0;

  /// Position of bus `id` in `buses`; throws ValidationError if absent.
  std::size_t bus_index(int id) const;
  bool is_generator_bus(int id) const;
  /// Index into `generators` of the slack generator, or 0 when no slack bus carries one.
  std::size_t reference_generator() const;
};

enum class CaseFormat { kCdf, kNative };

/// Parses a case. CDF input takes generators from bus records of type 2 and 3;
/// sections other than bus and branch data count toward `ignored_records`.
///
/// Native format, one record per line ('#' starts a comment), all values per-unit:
///
///     base_mva <MVA>
///     bus <id> <type 0|1|2|3> <load_p> <load_q> <shunt_g> <shunt_b> [voltage]
///     branch <from> <to> <r> <x> <b> [tap]
///     gen <bus> <p_out>
CaseData parse_case(std::string_view text, CaseFormat format);

/// Guesses the format from content ("BUS DATA FOLLOWS" marks CDF).
CaseFormat detect_case_format(std::string_view text);

CaseData read_case_file(const std::filesystem::path& path);

/// Checks the CaseData invariants (unique ids, resolvable branch endpoints, finite
/// impedances, at least one generator).
void validate(const CaseData& data);

/// Branch indices (0-based positions in CaseData::branches) carrying a switched
/// series capacitor.
struct Placement {
  std::vector<std::size_t> lines;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// One branch index per line; blank lines and '#' comments are skipped.
Placement parse_placement(std::string_view text);
Placement read_placement_file(const std::filesystem::path& path);
void write_placement(std::ostream& out, const Placement& placement);

}  // namespace gridswitch

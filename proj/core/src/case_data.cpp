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

#include <gridswitch/case_data.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>

#include <gridswitch/error.hpp>

namespace gridswitch {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// Fixed-column slice, 1-based inclusive, trimmed. Columns past the end are empty.
std::string_view columns(std::string_view line, std::size_t first, std::size_t last) {
  if (line.size() < first) return {};
  return trim(line.substr(first - 1, last - first + 1));
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

template <typename T>
T require(std::string_view text, const char* what, std::size_t line) {
  T value{};
  if (!parse_number(text, value)) {
    throw ParseError("bad " + std::string(what) + " '" + std::string(text) + "'", line);
  }
  return value;
}

// Optional fixed-column numeric field: blank means 0.
double optional_field(std::string_view text, const char* what, std::size_t line) {
  if (trim(text).empty()) return 0.0;
  return require<double>(text, what, line);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find('\n', pos);
    if (next == std::string_view::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  return lines;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    pos = line.find_first_not_of(" \t", pos);
    if (pos == std::string_view::npos) break;
    auto end = line.find_first_of(" \t", pos);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

BusType bus_type_from_code(int code, std::size_t line) {
  switch (code) {
    case 0:
    case 1:
      return BusType::kLoad;
    case 2:
      return BusType::kGenerator;
    case 3:
      return BusType::kSlack;
    default:
      throw ParseError("bus type must be 0..3, got " + std::to_string(code), line);
  }
}

CaseData parse_cdf(const std::vector<std::string_view>& lines) {
  CaseData data;
  enum class Section { kNone, kBus, kBranch, kOther } section = Section::kNone;
  bool header_seen = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const std::string_view line = lines[i];
    const std::string_view t = trim(line);
    if (t.empty()) continue;

    if (!header_seen) {
      header_seen = true;
      if (t.find("FOLLOWS") == std::string_view::npos) {
        double base = 0.0;
        if (parse_number(columns(line, 31, 37), base) && base > 0.0) data.base_mva = base;
        continue;
      }
    }

    if (section == Section::kNone) {
      if (starts_with(t, "BUS DATA FOLLOWS")) {
        section = Section::kBus;
      } else if (starts_with(t, "BRANCH DATA FOLLOWS")) {
        section = Section::kBranch;
      } else if (t.find("FOLLOWS") != std::string_view::npos) {
        section = Section::kOther;
      } else if (starts_with(t, "END OF DATA")) {
        break;
      } else {
        ++data.ignored_records;
      }
      continue;
    }

    if (starts_with(t, "-9")) {
      section = Section::kNone;
      continue;
    }

    if (section == Section::kOther) {
      ++data.ignored_records;
      continue;
    }

    if (section == Section::kBus) {
      if (line.size() < 67) throw ParseError("truncated bus record", lineno);
      Bus bus;
      bus.id = require<int>(columns(line, 1, 4), "bus number", lineno);
      bus.type = bus_type_from_code(require<int>(columns(line, 25, 26), "bus type", lineno), lineno);
      bus.voltage = optional_field(columns(line, 28, 33), "voltage", lineno);
      if (bus.voltage == 0.0) bus.voltage = 1.0;
      const double base = data.base_mva;
      bus.load_p = optional_field(columns(line, 41, 49), "load MW", lineno) / base;
      bus.load_q = optional_field(columns(line, 50, 58), "load MVAR", lineno) / base;
      const double gen_mw = optional_field(columns(line, 59, 67), "generation MW", lineno);
      bus.shunt_g = optional_field(columns(line, 107, 114), "shunt G", lineno);
      bus.shunt_b = optional_field(columns(line, 115, 122), "shunt B", lineno);
      data.buses.push_back(bus);
      if (bus.type != BusType::kLoad) data.generators.push_back({bus.id, gen_mw / base});
    } else {
      if (line.size() < 40) throw ParseError("truncated branch record", lineno);
      Branch br;
      br.from = require<int>(columns(line, 1, 4), "from bus", lineno);
      br.to = require<int>(columns(line, 6, 9), "to bus", lineno);
      br.r = require<double>(columns(line, 20, 29), "resistance", lineno);
      br.x = require<double>(columns(line, 30, 40), "reactance", lineno);
      br.b = optional_field(columns(line, 41, 50), "charging", lineno);
      br.tap = optional_field(columns(line, 77, 82), "tap ratio", lineno);
      data.branches.push_back(br);
    }
  }
  if (section == Section::kBus || section == Section::kBranch) {
    throw ParseError("unterminated data section (missing -999)", lines.size());
  }
  return data;
}

CaseData parse_native(const std::vector<std::string_view>& lines) {
  CaseData data;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = tokens(line);
    if (tok.empty()) continue;

    const auto need = [&](std::size_t lo, std::size_t hi) {
      if (tok.size() < lo || tok.size() > hi) {
        throw ParseError("'" + std::string(tok[0]) + "' record expects " + std::to_string(lo - 1) +
                             (lo == hi ? "" : "-" + std::to_string(hi - 1)) + " fields",
                         lineno);
      }
    };

    if (tok[0] == "base_mva") {
      need(2, 2);
      data.base_mva = require<double>(tok[1], "base MVA", lineno);
    } else if (tok[0] == "bus") {
      need(7, 8);
      Bus bus;
      bus.id = require<int>(tok[1], "bus number", lineno);
      bus.type = bus_type_from_code(require<int>(tok[2], "bus type", lineno), lineno);
      bus.load_p = require<double>(tok[3], "load P", lineno);
      bus.load_q = require<double>(tok[4], "load Q", lineno);
      bus.shunt_g = require<double>(tok[5], "shunt G", lineno);
      bus.shunt_b = require<double>(tok[6], "shunt B", lineno);
      if (tok.size() == 8) bus.voltage = require<double>(tok[7], "voltage", lineno);
      data.buses.push_back(bus);
    } else if (tok[0] == "branch") {
      need(6, 7);
      Branch br;
      br.from = require<int>(tok[1], "from bus", lineno);
      br.to = require<int>(tok[2], "to bus", lineno);
      br.r = require<double>(tok[3], "resistance", lineno);
      br.x = require<double>(tok[4], "reactance", lineno);
      br.b = require<double>(tok[5], "charging", lineno);
      if (tok.size() == 7) br.tap = require<double>(tok[6], "tap ratio", lineno);
      data.branches.push_back(br);
    } else if (tok[0] == "gen") {
      need(3, 3);
      data.generators.push_back(
          {require<int>(tok[1], "generator bus", lineno), require<double>(tok[2], "P", lineno)});
    } else {
      ++data.ignored_records;
    }
  }
  return data;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::size_t CaseData::bus_index(int id) const {
  const auto it = std::find_if(buses.begin(), buses.end(), [id](const Bus& b) { return b.id == id; });
  if (it == buses.end()) throw ValidationError("unknown bus " + std::to_string(id));
  return static_cast<std::size_t>(it - buses.begin());
}

bool CaseData::is_generator_bus(int id) const {
  return std::any_of(generators.begin(), generators.end(),
                     [id](const Generator& g) { return g.bus == id; });
}

std::size_t CaseData::reference_generator() const {
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const auto it = std::find_if(buses.begin(), buses.end(),
                                 [&](const Bus& b) { return b.id == generators[g].bus; });
    if (it != buses.end() && it->type == BusType::kSlack) return g;
  }
  return 0;
}

CaseFormat detect_case_format(std::string_view text) {
  return text.find("BUS DATA FOLLOWS") != std::string_view::npos ? CaseFormat::kCdf
                                                                  : CaseFormat::kNative;
}

CaseData parse_case(std::string_view text, CaseFormat format) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError("empty case text", 0);
  }
  const auto lines = split_lines(text);
  CaseData data = format == CaseFormat::kCdf ? parse_cdf(lines) : parse_native(lines);
  validate(data);
  return data;
}

CaseData read_case_file(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  try {
    return parse_case(text, detect_case_format(text));
  } catch (const ParseError& e) {
    throw e.in(path.string());
  }
}

void validate(const CaseData& data) {
  if (data.buses.empty()) throw ValidationError("case has no buses");
  if (!(data.base_mva > 0.0)) throw ValidationError("base MVA must be positive");
  std::unordered_set<int> ids;
  for (const auto& b : data.buses) {
    if (!ids.insert(b.id).second) throw ValidationError("duplicate bus id " + std::to_string(b.id));
  }
  for (std::size_t k = 0; k < data.branches.size(); ++k) {
    const auto& br = data.branches[k];
    for (int end : {br.from, br.to}) {
      if (!ids.contains(end)) {
        throw ValidationError("branch " + std::to_string(k) + " references missing bus " +
                              std::to_string(end));
      }
    }
    if (!std::isfinite(br.r) || !std::isfinite(br.x) || !std::isfinite(br.b) ||
        !std::isfinite(br.tap)) {
      throw ValidationError("branch " + std::to_string(k) + " has non-finite parameters");
    }
  }
  if (data.generators.empty()) throw ValidationError("case has no generators");
  std::unordered_set<int> gen_buses;
  for (const auto& g : data.generators) {
    if (!ids.contains(g.bus)) {
      throw ValidationError("generator at missing bus " + std::to_string(g.bus));
    }
    if (!gen_buses.insert(g.bus).second) {
      throw ValidationError("more than one generator at bus " + std::to_string(g.bus));
    }
  }
}

Placement parse_placement(std::string_view text) {
  Placement p;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    p.lines.push_back(require<std::size_t>(line, "branch index", i + 1));
  }
  return p;
}

Placement read_placement_file(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  try {
    return parse_placement(text);
  } catch (const ParseError& e) {
    throw e.in(path.string());
  }
}

void write_placement(std::ostream& out, const Placement& placement) {
  for (const auto line : placement.lines) out << line << '\n';
}

}  // namespace gridswitch

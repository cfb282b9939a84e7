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

#include <gridswitch/coverage.hpp>

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

#include <gridswitch/error.hpp>

namespace gridswitch {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<std::vector<std::size_t>> branch_generator_neighbors(const CaseData& data,
                                                                  CoverageRule rule) {
  std::unordered_map<int, std::size_t> gen_of_bus;
  for (std::size_t g = 0; g < data.generators.size(); ++g) gen_of_bus[data.generators[g].bus] = g;
  const auto gen_at = [&](int bus) -> const std::size_t* {
    const auto it = gen_of_bus.find(bus);
    return it == gen_of_bus.end() ? nullptr : &it->second;
  };

  std::vector<std::vector<std::size_t>> neighbors(data.branches.size());

  if (rule != CoverageRule::kZone) {
    for (std::size_t k = 0; k < data.branches.size(); ++k) {
      const auto& br = data.branches[k];
      const auto* a = gen_at(br.from);
      const auto* b = gen_at(br.to);
      std::set<std::size_t> s;
      if (rule == CoverageRule::kDirect) {
        if (a && b && *a != *b) s = {*a, *b};
      } else {
        if (a) s.insert(*a);
        if (b) s.insert(*b);
      }
      neighbors[k].assign(s.begin(), s.end());
    }
    return neighbors;
  }

  // Regions of non-generator buses joined by branches, and the generators bordering each.
  DisjointSets regions(data.buses.size());
  std::unordered_map<int, std::size_t> index_of_bus;
  for (std::size_t i = 0; i < data.buses.size(); ++i) index_of_bus[data.buses[i].id] = i;
  for (const auto& br : data.branches) {
    if (!gen_at(br.from) && !gen_at(br.to)) {
      regions.unite(index_of_bus.at(br.from), index_of_bus.at(br.to));
    }
  }
  std::unordered_map<std::size_t, std::set<std::size_t>> border;
  for (const auto& br : data.branches) {
    const auto* a = gen_at(br.from);
    const auto* b = gen_at(br.to);
    if (a && !b) border[regions.find(index_of_bus.at(br.to))].insert(*a);
    if (b && !a) border[regions.find(index_of_bus.at(br.from))].insert(*b);
  }
  const auto side = [&](int bus) {
    if (const auto* g = gen_at(bus)) return std::set<std::size_t>{*g};
    const auto it = border.find(regions.find(index_of_bus.at(bus)));
    return it == border.end() ? std::set<std::size_t>{} : it->second;
  };

  for (std::size_t k = 0; k < data.branches.size(); ++k) {
    auto s = side(data.branches[k].from);
    s.merge(side(data.branches[k].to));
    if (s.size() >= 2) neighbors[k].assign(s.begin(), s.end());
  }
  return neighbors;
}

std::vector<std::size_t> uncovered_generators(const CaseData& data, const Placement& placement,
                                              CoverageRule rule) {
  const auto neighbors = branch_generator_neighbors(data, rule);
  std::vector<bool> covered(data.generators.size(), false);
  for (const auto line : placement.lines) {
    if (line >= neighbors.size()) continue;
    for (const auto g : neighbors[line]) covered[g] = true;
  }
  std::vector<std::size_t> missing;
  for (std::size_t g = 0; g < covered.size(); ++g) {
    if (!covered[g]) missing.push_back(g);
  }
  return missing;
}

void validate_placement(const CaseData& data, const Placement& placement, CoverageRule rule) {
  std::set<std::size_t> seen;
  const auto neighbors = branch_generator_neighbors(data, rule);
  for (const auto line : placement.lines) {
    if (line >= data.branches.size()) {
      throw ValidationError("placement references branch " + std::to_string(line) + " of " +
                            std::to_string(data.branches.size()));
    }
    if (!seen.insert(line).second) {
      throw ValidationError("placement lists branch " + std::to_string(line) + " twice");
    }
    if (neighbors[line].empty()) {
      throw ValidationError("branch " + std::to_string(line) +
                            " does not join two generators under the coverage rule");
    }
  }
  const auto missing = uncovered_generators(data, placement, rule);
  if (!missing.empty()) {
    throw ValidationError("placement leaves " + std::to_string(missing.size()) +
                          " generator(s) uncovered, first at bus " +
                          std::to_string(data.generators[missing.front()].bus));
  }
}

}  // namespace gridswitch

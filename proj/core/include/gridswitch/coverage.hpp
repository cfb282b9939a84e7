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
#include <span>
#include <vector>

#include <gridswitch/case_data.hpp>

namespace gridswitch {

/// Which branches may carry a switched capacitor, and which generators a placed
/// branch serves.
///
///  - kZone: generators are adjacent when a path of non-generator buses joins them;
///    a branch serves every generator it touches directly or through the
///    non-generator region at either end. Default.
///  - kDirect: only branches joining two generator buses; serves both ends.
///  - kAdjacent: any branch touching a generator bus; serves the generator end(s).
enum class CoverageRule { kZone, kDirect, kAdjacent };

/// For each branch, the sorted generator indices it serves under `rule`.
/// Branches ineligible under the rule get an empty list.
std::vector<std::vector<std::size_t>> branch_generator_neighbors(const CaseData& data,
                                                                  CoverageRule rule);

/// Generator indices not served by any placed branch.
std::vector<std::size_t> uncovered_generators(const CaseData& data, const Placement& placement,
                                              CoverageRule rule = CoverageRule::kZone);

/// Throws ValidationError on out-of-range or duplicate indices, ineligible
/// branches, or uncovered generators.
void validate_placement(const CaseData& data, const Placement& placement,
                        CoverageRule rule = CoverageRule::kZone);

}  // namespace gridswitch

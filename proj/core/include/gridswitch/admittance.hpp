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

#include <Eigen/Dense>

#include <gridswitch/case_data.hpp>

namespace gridswitch {

using ComplexMatrix = Eigen::MatrixXcd;

/// Bus admittance matrix in case bus order.
///
/// Branches use the pi model with the tap on the from side:
///   Y_ff = (y + jb/2)/t^2, Y_ft = Y_tf = -y/t, Y_tt = y + jb/2,  y = 1/(r + jx).
/// Bus shunts add G + jB, constant-impedance loads add P - jQ.
/// With `switch_on`, every placed branch is stamped with reactance 2x.
ComplexMatrix build_admittance(const CaseData& data, const Placement& placement, bool switch_on);

/// Schur complement keeping the nodes in `keep` (in that order):
///   Y_red = Y_kk - Y_ke Y_ee^-1 Y_ek.
/// Throws ReductionError when the eliminated block's reciprocal condition
/// estimate falls below `min_rcond`.
ComplexMatrix kron_reduce(const ComplexMatrix& y, std::span<const std::size_t> keep,
                          double min_rcond = 1e-13);

/// Attaches one internal node per generator behind reactance `x_dp[g]` and
/// eliminates every bus, leaving the admittance between generator internal
/// nodes (generator order).
ComplexMatrix reduce_network(const ComplexMatrix& y, const CaseData& data,
                             std::span<const double> x_dp);

}  // namespace gridswitch

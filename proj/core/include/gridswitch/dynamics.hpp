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

#include <cstdint>

#include <Eigen/Dense>

#include <gridswitch/modes.hpp>

namespace gridswitch {

/// Swing-equation vector field f_mode(x):
///   d(delta_i)/dt = omega_i
///   d(omega_i)/dt = omega_s / (2 H_i) * (P_m,i - P_e,i(delta)).
/// Throws NumericError for non-finite input.
State dynamics(const ModeSet& modes, ModeId mode, const State& x);

/// Dense Df_mode(x), state_dim x state_dim.
Eigen::MatrixXd dynamics_jacobian(const ModeSet& modes, ModeId mode, const State& x);

/// Phases of every generator (reference included, at 0) for state x.
Eigen::VectorXd full_phases(const ModeSet& modes, const State& x);

/// P_e for all generators given all phases (reference included).
Eigen::VectorXd electrical_power(const ModeSet& modes, ModeId mode, const Eigen::VectorXd& phases);

/// dP_e,i / d(phase_j) over all generators.
Eigen::MatrixXd electrical_power_jacobian(const ModeSet& modes, ModeId mode,
                                          const Eigen::VectorXd& phases);

/// Adds i.i.d. uniform(-range, range) samples to the phase half of x.
/// Throws ValidationError if range < 0.
State perturb(const State& x, double range, std::uint64_t seed);

}  // namespace gridswitch

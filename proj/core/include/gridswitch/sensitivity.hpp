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
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include <gridswitch/simulate.hpp>
#include <gridswitch/system.hpp>

namespace gridswitch {

struct InsertionMinimum {
  double theta = 0.0;
  ModeId mode = 1;
  double time = 0.0;
  std::size_t sample = 0;
};

struct SensitivityField {
  std::vector<double> times;
  Eigen::MatrixXd adjoint;    // state_dim x samples
  Eigen::MatrixXd gradients;  // mode_count x samples; row m is d_{m+1}(t)
  InsertionMinimum minimum;
};

/// Backward RK4 for rho' = -Df(x)^T rho - Dl(x)^T from rho(t_f) = 0 on the
/// trajectory grid, x linear between samples. Throws NumericError on non-finite
/// values or a diverged trajectory.
Eigen::MatrixXd adjoint(const Trajectory& traj, const SwitchedSystem& system,
                        const RunningCost& ell);

/// d_sigma(t_k) = rho_k^T (f_sigma(x_k) - f_active(x_k)); exactly 0 for the active mode.
Eigen::MatrixXd insertion_gradient(const Trajectory& traj, const Eigen::MatrixXd& rho,
                                   const SwitchedSystem& system);

/// Global minimum of the gradient samples. Ties go to the earliest time, then
/// the lowest mode. Throws ValidationError on an empty field.
InsertionMinimum theta(const Eigen::MatrixXd& gradients, const std::vector<double>& times);

/// adjoint + insertion_gradient + theta.
SensitivityField sensitivity(const Trajectory& traj, const SwitchedSystem& system,
                             const RunningCost& ell);

/// CSV `t,d_1,...,d_N`.
void write_gradient_csv(std::ostream& out, const SensitivityField& field);

}  // namespace gridswitch

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

#include <Eigen/Dense>

namespace gridswitch {

using State = Eigen::VectorXd;

/// Mode labels are 1-based, matching schedule files: mode 1 .. mode_count().
using ModeId = int;

/// Autonomous switched system xdot = f_sigma(x). The simulator, the adjoint
/// pass and the scheduler only see this interface.
class SwitchedSystem {
 public:
  virtual ~SwitchedSystem() = default;

  virtual std::size_t mode_count() const = 0;
  virtual std::size_t state_dim() const = 0;

  /// dx = f_mode(x). `dx` is pre-sized to state_dim().
  virtual void evaluate(ModeId mode, const State& x, State& dx) const = 0;

  /// out = Df_mode(x)^T v.
  virtual void jacobian_transpose_product(ModeId mode, const State& x, const Eigen::VectorXd& v,
                                          Eigen::VectorXd& out) const = 0;

  State evaluate(ModeId mode, const State& x) const {
    State dx(static_cast<Eigen::Index>(state_dim()));
    evaluate(mode, x, dx);
    return dx;
  }
};

/// Running cost l(x) of J = int_0^tf l(x(t)) dt.
class RunningCost {
 public:
  virtual ~RunningCost() = default;
  virtual double value(const State& x) const = 0;
  /// grad = Dl(x)^T, pre-sized.
  virtual void gradient(const State& x, Eigen::VectorXd& grad) const = 0;
};

}  // namespace gridswitch

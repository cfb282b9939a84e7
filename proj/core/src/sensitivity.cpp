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

#include <gridswitch/sensitivity.hpp>

#include <ostream>

#include <gridswitch/csv.hpp>
#include <gridswitch/error.hpp>

namespace gridswitch {

Eigen::MatrixXd adjoint(const Trajectory& traj, const SwitchedSystem& system,
                        const RunningCost& ell) {
  if (traj.samples() == 0) throw ValidationError("empty trajectory");
  if (traj.diverged) throw NumericError("cannot run the adjoint of a diverged trajectory");
  const auto dim = static_cast<Eigen::Index>(system.state_dim());
  const std::size_t n = traj.samples();
  Eigen::MatrixXd rho(dim, static_cast<Eigen::Index>(n));
  rho.col(static_cast<Eigen::Index>(n - 1)).setZero();

  Eigen::VectorXd jt(dim), grad(dim), r(dim), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  State xm(dim);
  const auto rhs = [&](ModeId mode, const State& x, const Eigen::VectorXd& p, Eigen::VectorXd& out) {
    system.jacobian_transpose_product(mode, x, p, jt);
    ell.gradient(x, grad);
    out = -jt - grad;
  };

  for (std::size_t k = n - 1; k-- > 0;) {
    const double h = traj.times[k + 1] - traj.times[k];
    const ModeId mode = traj.step_modes[k];
    const auto xa = traj.states.col(static_cast<Eigen::Index>(k));
    const auto xb = traj.states.col(static_cast<Eigen::Index>(k + 1));
    const State xa_v = xa;
    const State xb_v = xb;
    xm = 0.5 * (xa_v + xb_v);
    r = rho.col(static_cast<Eigen::Index>(k + 1));
    rhs(mode, xb_v, r, k1);
    tmp = r - (0.5 * h) * k1;
    rhs(mode, xm, tmp, k2);
    tmp = r - (0.5 * h) * k2;
    rhs(mode, xm, tmp, k3);
    tmp = r - h * k3;
    rhs(mode, xa_v, tmp, k4);
    r -= (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!r.allFinite()) throw NumericError("adjoint became non-finite");
    rho.col(static_cast<Eigen::Index>(k)) = r;
  }
  return rho;
}

Eigen::MatrixXd insertion_gradient(const Trajectory& traj, const Eigen::MatrixXd& rho,
                                   const SwitchedSystem& system) {
  const auto modes = static_cast<Eigen::Index>(system.mode_count());
  const auto n = static_cast<Eigen::Index>(traj.samples());
  if (rho.cols() != n) throw ValidationError("adjoint and trajectory sample counts differ");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(modes, n);
  const auto dim = static_cast<Eigen::Index>(system.state_dim());
  State fa(dim), fs(dim);
  for (Eigen::Index k = 0; k < n; ++k) {
    const State x = traj.states.col(k);
    const ModeId active = traj.mode_at_sample(static_cast<std::size_t>(k));
    system.evaluate(active, x, fa);
    for (Eigen::Index m = 0; m < modes; ++m) {
      const auto mode = static_cast<ModeId>(m + 1);
      if (mode == active) continue;
      system.evaluate(mode, x, fs);
      d(m, k) = rho.col(k).dot(fs - fa);
    }
  }
  return d;
}

InsertionMinimum theta(const Eigen::MatrixXd& gradients, const std::vector<double>& times) {
  if (gradients.size() == 0) throw ValidationError("empty insertion-gradient field");
  if (static_cast<std::size_t>(gradients.cols()) != times.size()) {
    throw ValidationError("gradient field and time grid differ in length");
  }
  InsertionMinimum best{gradients(0, 0), 1, times[0], 0};
  for (Eigen::Index k = 0; k < gradients.cols(); ++k) {
    for (Eigen::Index m = 0; m < gradients.rows(); ++m) {
      if (gradients(m, k) < best.theta) {
        best = {gradients(m, k), static_cast<ModeId>(m + 1), times[static_cast<std::size_t>(k)],
                static_cast<std::size_t>(k)};
      }
    }
  }
  return best;
}

SensitivityField sensitivity(const Trajectory& traj, const SwitchedSystem& system,
                             const RunningCost& ell) {
  SensitivityField field;
  field.times = traj.times;
  field.adjoint = adjoint(traj, system, ell);
  field.gradients = insertion_gradient(traj, field.adjoint, system);
  field.minimum = theta(field.gradients, field.times);
  return field;
}

void write_gradient_csv(std::ostream& out, const SensitivityField& field) {
  out << "t";
  for (Eigen::Index m = 1; m <= field.gradients.rows(); ++m) out << ",d_" << m;
  out << '\n';
  for (std::size_t k = 0; k < field.times.size(); ++k) {
    write_number(out, field.times[k]);
    for (Eigen::Index m = 0; m < field.gradients.rows(); ++m) {
      out << ',';
      write_number(out, field.gradients(m, static_cast<Eigen::Index>(k)));
    }
    out << '\n';
  }
}

}  // namespace gridswitch

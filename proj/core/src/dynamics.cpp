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

#include <gridswitch/dynamics.hpp>

#include <cmath>
#include <random>
#include <string>

#include <gridswitch/error.hpp>

namespace gridswitch {
namespace {

using Eigen::Index;
using Eigen::VectorXd;

// cos/sin of every phase plus the four coupling products of the P_e expansion.
struct PhaseTerms {
  VectorXd c, s, gc, gs, bc, bs;

  PhaseTerms(const ModeNetwork& net, const VectorXd& phases)
      : c(phases.array().cos()), s(phases.array().sin()) {
    gc.noalias() = net.coupling_g * c;
    gs.noalias() = net.coupling_g * s;
    bc.noalias() = net.coupling_b * c;
    bs.noalias() = net.coupling_b * s;
  }

  VectorXd power(const ModeNetwork& net, const VectorXd& e) const {
    return e.array().square() * net.self_conductance.array() + c.array() * gc.array() +
           s.array() * gs.array() + s.array() * bc.array() - c.array() * bs.array();
  }

  // dP_e,i / d(phase_i)
  VectorXd diagonal_sensitivity() const {
    return -(s.array() * gc.array() - c.array() * gs.array() - c.array() * bc.array() -
             s.array() * bs.array());
  }
};

void check_state(const ModeSet& modes, const State& x) {
  if (static_cast<std::size_t>(x.size()) != modes.state_dim()) {
    throw ValidationError("state has dimension " + std::to_string(x.size()) + ", expected " +
                          std::to_string(modes.state_dim()));
  }
  if (!x.allFinite()) throw NumericError("non-finite state");
}

VectorXd phases_of(const ModeSet& modes, const State& x) {
  const auto k = static_cast<Index>(modes.phase_dim());
  const auto ref = static_cast<Index>(modes.reference());
  VectorXd phases(k + 1);
  phases.head(ref) = x.head(ref);
  phases(ref) = 0.0;
  phases.tail(k - ref) = x.segment(ref, k - ref);
  return phases;
}

// Drops the reference entry of a per-generator vector.
VectorXd without_reference(const ModeSet& modes, const VectorXd& v) {
  const auto k = static_cast<Index>(modes.phase_dim());
  const auto ref = static_cast<Index>(modes.reference());
  VectorXd out(k);
  out.head(ref) = v.head(ref);
  out.tail(k - ref) = v.tail(k - ref);
  return out;
}

VectorXd with_reference(const ModeSet& modes, const VectorXd& v) {
  const auto k = static_cast<Index>(modes.phase_dim());
  const auto ref = static_cast<Index>(modes.reference());
  VectorXd out(k + 1);
  out.head(ref) = v.head(ref);
  out(ref) = 0.0;
  out.tail(k - ref) = v.tail(k - ref);
  return out;
}

VectorXd acceleration_gain(const ModeSet& modes) {
  return without_reference(modes, (modes.omega_s() / (2.0 * modes.inertia().array())).matrix());
}

}  // namespace

void ModeSet::evaluate(ModeId mode, const State& x, State& dx) const {
  const ModeNetwork& net = network(mode);
  const auto k = static_cast<Index>(phase_dim());
  const PhaseTerms terms(net, phases_of(*this, x));
  const VectorXd imbalance = without_reference(*this, mechanical_power_ - terms.power(net, voltage_));
  dx.head(k) = x.tail(k);
  dx.tail(k) = acceleration_gain(*this).cwiseProduct(imbalance);
}

void ModeSet::jacobian_transpose_product(ModeId mode, const State& x, const VectorXd& v,
                                         VectorXd& out) const {
  const ModeNetwork& net = network(mode);
  const auto k = static_cast<Index>(phase_dim());
  const PhaseTerms t(net, phases_of(*this, x));

  // w = gain .* v_omega over all generators (0 at the reference).
  const VectorXd w = with_reference(*this, acceleration_gain(*this).cwiseProduct(v.tail(k)));
  const VectorXd ws = w.cwiseProduct(t.s);
  const VectorXd wc = w.cwiseProduct(t.c);
  const VectorXd gws = net.coupling_g.transpose() * ws;
  const VectorXd gwc = net.coupling_g.transpose() * wc;
  const VectorXd bwc = net.coupling_b.transpose() * wc;
  const VectorXd bws = net.coupling_b.transpose() * ws;
  // u_j = sum_i w_i dP_e,i/d(phase_j)
  const VectorXd u = t.c.cwiseProduct(gws) - t.s.cwiseProduct(gwc) - t.c.cwiseProduct(bwc) -
                     t.s.cwiseProduct(bws) + w.cwiseProduct(t.diagonal_sensitivity());

  const VectorXd v_delta = v.head(k);
  out.head(k) = -without_reference(*this, u);
  out.tail(k) = v_delta;
}

State dynamics(const ModeSet& modes, ModeId mode, const State& x) {
  check_state(modes, x);
  return modes.evaluate(mode, x);
}

Eigen::MatrixXd dynamics_jacobian(const ModeSet& modes, ModeId mode, const State& x) {
  check_state(modes, x);
  const auto k = static_cast<Index>(modes.phase_dim());
  const Eigen::MatrixXd dpe = electrical_power_jacobian(modes, mode, phases_of(modes, x));
  const auto ref = static_cast<Index>(modes.reference());
  std::vector<Index> keep;
  for (Index g = 0; g <= k; ++g) {
    if (g != ref) keep.push_back(g);
  }
  const VectorXd gain = acceleration_gain(modes);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  jac.topRightCorner(k, k).setIdentity();
  jac.bottomLeftCorner(k, k) = -(gain.asDiagonal() * dpe(keep, keep));
  return jac;
}

VectorXd full_phases(const ModeSet& modes, const State& x) {
  check_state(modes, x);
  return phases_of(modes, x);
}

VectorXd electrical_power(const ModeSet& modes, ModeId mode, const VectorXd& phases) {
  if (static_cast<std::size_t>(phases.size()) != modes.generator_count()) {
    throw ValidationError("need one phase per generator");
  }
  const ModeNetwork& net = modes.network(mode);
  return PhaseTerms(net, phases).power(net, modes.voltage());
}

Eigen::MatrixXd electrical_power_jacobian(const ModeSet& modes, ModeId mode,
                                          const VectorXd& phases) {
  if (static_cast<std::size_t>(phases.size()) != modes.generator_count()) {
    throw ValidationError("need one phase per generator");
  }
  const ModeNetwork& net = modes.network(mode);
  const PhaseTerms t(net, phases);
  const Index n = phases.size();
  Eigen::MatrixXd d(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double sin_ij = t.s(i) * t.c(j) - t.c(i) * t.s(j);
      const double cos_ij = t.c(i) * t.c(j) + t.s(i) * t.s(j);
      d(i, j) = net.coupling_g(i, j) * sin_ij - net.coupling_b(i, j) * cos_ij;
    }
  }
  d.diagonal() = t.diagonal_sensitivity();
  return d;
}

State perturb(const State& x, double range, std::uint64_t seed) {
  if (!(range >= 0.0)) throw ValidationError("perturbation range must be non-negative");
  if (x.size() % 2 != 0) throw ValidationError("state must hold phases and speeds");
  State out = x;
  if (range == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-range, range);
  for (Index i = 0; i < x.size() / 2; ++i) out(i) += dist(rng);
  return out;
}

}  // namespace gridswitch

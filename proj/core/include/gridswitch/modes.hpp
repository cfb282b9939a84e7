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
#include <map>
#include <vector>

#include <Eigen/Dense>

#include <gridswitch/admittance.hpp>
#include <gridswitch/case_data.hpp>
#include <gridswitch/coverage.hpp>
#include <gridswitch/system.hpp>

namespace gridswitch {

/// Classical-model data the case file does not carry. Overrides are keyed by
/// generator bus id.
struct DynamicParams {
  double h_default = 3.0;    // inertia constant, s
  double xdp_default = 0.2;  // transient reactance, p.u.
  double fs_hz = 60.0;
  std::map<int, double> h_by_bus;
  std::map<int, double> xdp_by_bus;
  CoverageRule coverage = CoverageRule::kZone;

  double omega_s() const;
  double inertia(int bus) const;
  double transient_reactance(int bus) const;
};

/// Reduced network of one mode, at generator internal nodes.
struct ModeNetwork {
  Eigen::MatrixXd magnitude;         // |Y_ij|
  Eigen::MatrixXd angle;             // psi_ij
  Eigen::VectorXd self_conductance;  // G_ii
  // E_i E_j G_ij and E_i E_j B_ij with zero diagonal, evaluated as
  // P_e,i = E_i^2 G_ii + sum_j [Gc_ij cos(d_i - d_j) + Bc_ij sin(d_i - d_j)].
  Eigen::MatrixXd coupling_g;
  Eigen::MatrixXd coupling_b;
};

/// Swing-equation switched system. The state holds the phases of the
/// non-reference generators followed by their speed deviations from omega_s;
/// the reference generator is an infinite bus (phase 0, speed omega_s).
class ModeSet final : public SwitchedSystem {
 public:
  /// `reduced[m]` is mode m+1's reduced admittance. P_m is set so that the zero
  /// state is an equilibrium of mode 1. Throws ValidationError on broken
  /// invariants (fewer than two generators, asymmetric Y, H or E not positive).
  ModeSet(const std::vector<ComplexMatrix>& reduced, Eigen::VectorXd voltage,
          Eigen::VectorXd inertia, double omega_s, std::size_t reference,
          std::vector<int> generator_buses = {});

  std::size_t mode_count() const override { return networks_.size(); }
  std::size_t state_dim() const override { return 2 * phase_dim(); }
  std::size_t generator_count() const { return static_cast<std::size_t>(voltage_.size()); }
  std::size_t phase_dim() const { return generator_count() - 1; }

  const ModeNetwork& network(ModeId mode) const;
  const Eigen::VectorXd& voltage() const { return voltage_; }
  const Eigen::VectorXd& inertia() const { return inertia_; }
  const Eigen::VectorXd& mechanical_power() const { return mechanical_power_; }
  double omega_s() const { return omega_s_; }
  std::size_t reference() const { return reference_; }
  const std::vector<int>& generator_buses() const { return generator_buses_; }

  /// Generator index of state phase slot k.
  std::size_t generator_of_slot(std::size_t k) const { return k < reference_ ? k : k + 1; }

  using SwitchedSystem::evaluate;
  void evaluate(ModeId mode, const State& x, State& dx) const override;
  void jacobian_transpose_product(ModeId mode, const State& x, const Eigen::VectorXd& v,
                                  Eigen::VectorXd& out) const override;

 private:
  std::vector<ModeNetwork> networks_;
  Eigen::VectorXd voltage_;
  Eigen::VectorXd inertia_;
  Eigen::VectorXd mechanical_power_;
  double omega_s_;
  std::size_t reference_;
  std::vector<int> generator_buses_;
};

/// Mode 1: every capacitor off. Mode 2: every capacitor on (placed reactances doubled).
/// Voltages are flat 1 p.u.; the reference is the slack-bus generator.
ModeSet build_modes(const CaseData& data, const Placement& placement, const DynamicParams& params);

}  // namespace gridswitch

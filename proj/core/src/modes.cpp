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

#include <gridswitch/modes.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include <gridswitch/dynamics.hpp>
#include <gridswitch/error.hpp>

namespace gridswitch {

double DynamicParams::omega_s() const { return 2.0 * std::numbers::pi * fs_hz; }

double DynamicParams::inertia(int bus) const {
  const auto it = h_by_bus.find(bus);
  return it == h_by_bus.end() ? h_default : it->second;
}

double DynamicParams::transient_reactance(int bus) const {
  const auto it = xdp_by_bus.find(bus);
  return it == xdp_by_bus.end() ? xdp_default : it->second;
}

namespace {

ModeNetwork make_network(const ComplexMatrix& y, const Eigen::VectorXd& e) {
  const auto n = y.rows();
  ModeNetwork net;
  net.magnitude = y.cwiseAbs();
  net.angle.resize(n, n);
  net.coupling_g.resize(n, n);
  net.coupling_b.resize(n, n);
  net.self_conductance = y.diagonal().real();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      net.angle(i, j) = std::arg(y(i, j));
      const double ee = i == j ? 0.0 : e(i) * e(j);
      net.coupling_g(i, j) = ee * y(i, j).real();
      net.coupling_b(i, j) = ee * y(i, j).imag();
    }
  }
  return net;
}

}  // namespace

ModeSet::ModeSet(const std::vector<ComplexMatrix>& reduced, Eigen::VectorXd voltage,
                 Eigen::VectorXd inertia, double omega_s, std::size_t reference,
                 std::vector<int> generator_buses)
    : voltage_(std::move(voltage)),
      inertia_(std::move(inertia)),
      omega_s_(omega_s),
      reference_(reference),
      generator_buses_(std::move(generator_buses)) {
  const auto n = voltage_.size();
  if (reduced.size() < 2) throw ValidationError("a mode set needs at least two modes");
  if (n < 2) throw ValidationError("a mode set needs at least two generators");
  if (inertia_.size() != n) throw ValidationError("need one inertia constant per generator");
  if (static_cast<Eigen::Index>(reference_) >= n) throw ValidationError("reference out of range");
  if (!(omega_s_ > 0.0)) throw ValidationError("synchronous speed must be positive");
  if (!((voltage_.array() > 0.0).all())) throw ValidationError("internal voltages must be positive");
  if (!((inertia_.array() > 0.0).all())) throw ValidationError("inertia constants must be positive");
  if (generator_buses_.empty()) {
    for (Eigen::Index g = 0; g < n; ++g) generator_buses_.push_back(static_cast<int>(g + 1));
  }
  for (std::size_t m = 0; m < reduced.size(); ++m) {
    const auto& y = reduced[m];
    if (y.rows() != n || y.cols() != n) {
      throw ValidationError("mode " + std::to_string(m + 1) + " matrix has the wrong size");
    }
    if (!y.allFinite()) throw ValidationError("mode " + std::to_string(m + 1) + " is not finite");
    const double asym = (y - y.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-9) {
      throw ValidationError("mode " + std::to_string(m + 1) + " reduced admittance is asymmetric");
    }
    networks_.push_back(make_network(y, voltage_));
  }
  // Same arithmetic as the vector field, so f_1(0) vanishes bitwise.
  mechanical_power_ = electrical_power(*this, 1, Eigen::VectorXd::Zero(n));
}

const ModeNetwork& ModeSet::network(ModeId mode) const {
  if (mode < 1 || static_cast<std::size_t>(mode) > networks_.size()) {
    throw ValidationError("mode " + std::to_string(mode) + " out of range");
  }
  return networks_[static_cast<std::size_t>(mode - 1)];
}

ModeSet build_modes(const CaseData& data, const Placement& placement, const DynamicParams& params) {
  validate_placement(data, placement, params.coverage);
  const std::size_t gens = data.generators.size();
  std::vector<double> x_dp(gens);
  Eigen::VectorXd h(static_cast<Eigen::Index>(gens));
  std::vector<int> buses(gens);
  for (std::size_t g = 0; g < gens; ++g) {
    buses[g] = data.generators[g].bus;
    x_dp[g] = params.transient_reactance(buses[g]);
    h(static_cast<Eigen::Index>(g)) = params.inertia(buses[g]);
  }
  std::vector<ComplexMatrix> reduced;
  for (const bool on : {false, true}) {
    reduced.push_back(reduce_network(build_admittance(data, placement, on), data, x_dp));
  }
  return ModeSet(reduced, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(gens)), h,
                 params.omega_s(), data.reference_generator(), std::move(buses));
}

}  // namespace gridswitch

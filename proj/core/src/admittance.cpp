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

#include <gridswitch/admittance.hpp>

#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#include <gridswitch/error.hpp>

namespace gridswitch {

using cd = std::complex<double>;

ComplexMatrix build_admittance(const CaseData& data, const Placement& placement, bool switch_on) {
  const auto n = static_cast<Eigen::Index>(data.buses.size());
  ComplexMatrix y = ComplexMatrix::Zero(n, n);

  std::vector<bool> switched(data.branches.size(), false);
  for (const auto line : placement.lines) {
    if (line >= data.branches.size()) {
      throw ValidationError("placement references branch " + std::to_string(line));
    }
    switched[line] = true;
  }

  for (std::size_t k = 0; k < data.branches.size(); ++k) {
    const Branch& br = data.branches[k];
    const double x = (switch_on && switched[k]) ? 2.0 * br.x : br.x;
    if (br.r == 0.0 && x == 0.0) {
      throw ValidationError("branch " + std::to_string(k) + " has zero impedance");
    }
    const cd ys = 1.0 / cd(br.r, x);
    const cd charging(0.0, br.b / 2.0);
    const double tap = br.tap == 0.0 ? 1.0 : br.tap;
    const auto f = static_cast<Eigen::Index>(data.bus_index(br.from));
    const auto t = static_cast<Eigen::Index>(data.bus_index(br.to));
    y(f, f) += (ys + charging) / (tap * tap);
    y(t, t) += ys + charging;
    y(f, t) -= ys / tap;
    y(t, f) -= ys / tap;
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    const Bus& bus = data.buses[static_cast<std::size_t>(i)];
    y(i, i) += cd(bus.shunt_g, bus.shunt_b) + cd(bus.load_p, -bus.load_q);
  }
  return y;
}

ComplexMatrix kron_reduce(const ComplexMatrix& y, std::span<const std::size_t> keep,
                          double min_rcond) {
  const auto n = static_cast<std::size_t>(y.rows());
  if (y.cols() != y.rows()) throw ValidationError("admittance matrix must be square");
  std::vector<bool> kept(n, false);
  for (const auto k : keep) {
    if (k >= n || kept[k]) throw ValidationError("invalid or repeated retained node");
    kept[k] = true;
  }
  std::vector<Eigen::Index> elim;
  for (std::size_t i = 0; i < n; ++i) {
    if (!kept[i]) elim.push_back(static_cast<Eigen::Index>(i));
  }
  std::vector<Eigen::Index> kk(keep.begin(), keep.end());

  const ComplexMatrix ykk = y(kk, kk);
  if (elim.empty()) return ykk;

  const ComplexMatrix yke = y(kk, elim);
  const ComplexMatrix yek = y(elim, kk);
  const ComplexMatrix yee = y(elim, elim);
  const Eigen::PartialPivLU<ComplexMatrix> lu(yee);
  const double rcond = lu.rcond();
  if (!(rcond >= min_rcond)) {
    throw ReductionError("eliminated block is numerically singular (rcond " +
                         std::to_string(rcond) + ")");
  }
  ComplexMatrix reduced = ykk - yke * lu.solve(yek);
  // Elimination of a symmetric matrix is symmetric; remove rounding asymmetry.
  if (y.isApprox(y.transpose(), 1e-12)) reduced = (0.5 * (reduced + reduced.transpose())).eval();
  return reduced;
}

ComplexMatrix reduce_network(const ComplexMatrix& y, const CaseData& data,
                             std::span<const double> x_dp) {
  const std::size_t buses = data.buses.size();
  const std::size_t gens = data.generators.size();
  if (static_cast<std::size_t>(y.rows()) != buses) {
    throw ValidationError("admittance size does not match the case");
  }
  if (x_dp.size() != gens) throw ValidationError("need one transient reactance per generator");

  const auto total = static_cast<Eigen::Index>(buses + gens);
  ComplexMatrix aug = ComplexMatrix::Zero(total, total);
  aug.topLeftCorner(y.rows(), y.cols()) = y;
  std::vector<std::size_t> keep(gens);
  for (std::size_t g = 0; g < gens; ++g) {
    if (!(x_dp[g] > 0.0)) throw ValidationError("transient reactance must be positive");
    const cd yg = 1.0 / cd(0.0, x_dp[g]);
    const auto b = static_cast<Eigen::Index>(data.bus_index(data.generators[g].bus));
    const auto in = static_cast<Eigen::Index>(buses + g);
    aug(b, b) += yg;
    aug(in, in) += yg;
    aug(b, in) -= yg;
    aug(in, b) -= yg;
    keep[g] = buses + g;
  }
  return kron_reduce(aug, keep);
}

}  // namespace gridswitch

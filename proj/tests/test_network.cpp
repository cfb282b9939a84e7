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


#include <complex>
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <gridswitch/admittance.hpp>
#include <gridswitch/case_data.hpp>
#include <gridswitch/coverage.hpp>
#include <gridswitch/dynamics.hpp>
#include <gridswitch/error.hpp>
#include <gridswitch/modes.hpp>

#include "support.hpp"

namespace gridswitch {
namespace {

using cd = std::complex<double>;
using testing::fixture118;
using testing::toy_case;
using testing::toy_modes;

// Gaussian elimination of one node at a time, written out entry by entry.
ComplexMatrix eliminate_by_hand(ComplexMatrix y, std::vector<std::size_t> drop) {
  std::sort(drop.rbegin(), drop.rend());
  for (const std::size_t k : drop) {
    const Eigen::Index n = y.rows();
    ComplexMatrix next(n - 1, n - 1);
    for (Eigen::Index i = 0, r = 0; i < n; ++i) {
      if (i == static_cast<Eigen::Index>(k)) continue;
      for (Eigen::Index j = 0, c = 0; j < n; ++j) {
        if (j == static_cast<Eigen::Index>(k)) continue;
        const auto kk = static_cast<Eigen::Index>(k);
        next(r, c++) = y(i, j) - y(i, kk) * y(kk, j) / y(kk, kk);
      }
      ++r;
    }
    y = next;
  }
  return y;
}

TEST(CaseData, Fixture118Counts) {
  const CaseData& data = fixture118().data;
  EXPECT_EQ(data.buses.size(), 118u);
  EXPECT_EQ(data.branches.size(), 186u);
  EXPECT_EQ(data.generators.size(), 54u);
  EXPECT_DOUBLE_EQ(data.base_mva, 100.0);
  EXPECT_EQ(data.generators[data.reference_generator()].bus, 69);
}

TEST(CaseData, EmptyTextIsParseError) {
  EXPECT_THROW(parse_case("", CaseFormat::kNative), ParseError);
  EXPECT_THROW(parse_case("  \n\n", CaseFormat::kCdf), ParseError);
}

TEST(CaseData, NativeRoundTrip) {
  const CaseData data = parse_case(
      "bus 1 3 0 0 0 0\nbus 2 2 0 0 0 0\nbranch 1 2 0.013 0.117 0\ngen 1 0\ngen 2 0\n",
      CaseFormat::kNative);
  ASSERT_EQ(data.branches.size(), 1u);
  EXPECT_DOUBLE_EQ(data.branches[0].r, 0.013);
  EXPECT_DOUBLE_EQ(data.branches[0].x, 0.117);
}

TEST(CaseData, MalformedRecordReportsLine) {
  try {
    parse_case("bus 1 3 0 0 0 0\nbus 2 2 0 zero 0 0\n", CaseFormat::kNative);
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(CaseData, DanglingBranchIsValidationError) {
  EXPECT_THROW(parse_case("bus 1 3 0 0 0 0\nbranch 1 7 0 0.1 0\ngen 1 0\n", CaseFormat::kNative),
               ValidationError);
}

TEST(CaseData, UnknownRecordsAreCounted) {
  const CaseData data =
      parse_case("bus 1 3 0 0 0 0\nbus 2 2 0 0 0 0\nbranch 1 2 0 0.1 0\narea 1 2\ngen 1 0\n",
                 CaseFormat::kNative);
  EXPECT_EQ(data.ignored_records, 1u);
}

TEST(CaseData, MissingFileNamesPath) {
  try {
    read_case_file("/nonexistent/case.cdf");
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/case.cdf"), std::string::npos);
  }
}

TEST(Placement, ParseSkipsCommentsAndBlanks) {
  const Placement p = parse_placement("# header\n3\n\n 7 # trailing\n");
  EXPECT_EQ(p.lines, (std::vector<std::size_t>{3, 7}));
  EXPECT_THROW(parse_placement("3\nx\n"), ParseError);
}

TEST(Placement, ShippedPlacementHas26CoveringLines) {
  const auto& f = fixture118();
  EXPECT_EQ(f.placement.lines.size(), 26u);
  EXPECT_NO_THROW(validate_placement(f.data, f.placement));
  EXPECT_TRUE(uncovered_generators(f.data, f.placement).empty());
}

TEST(Admittance, SingleLineStamp) {
  const CaseData data = parse_case(
      "bus 1 3 0 0 0 0\nbus 2 2 0 0 0 0\nbranch 1 2 0 0.1 0\ngen 1 0\ngen 2 0\n",
      CaseFormat::kNative);
  const ComplexMatrix off = build_admittance(data, {}, false);
  EXPECT_NEAR(std::abs(off(0, 0) - cd(0, -10)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(off(0, 1) - cd(0, 10)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(off(1, 0) - cd(0, 10)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(off(1, 1) - cd(0, -10)), 0.0, 1e-12);

  const ComplexMatrix on = build_admittance(data, Placement{{0}}, true);
  EXPECT_NEAR(std::abs(on(0, 1)), 5.0, 1e-12);
  // Switch off leaves placed lines alone.
  EXPECT_NEAR((build_admittance(data, Placement{{0}}, false) - off).norm(), 0.0, 0.0);
}

TEST(Admittance, ThreeBusPiModelWithTapAndCharging) {
  const CaseData data = toy_case();
  const ComplexMatrix y = build_admittance(data, {}, false);

  const cd y12 = 1.0 / cd(0.01, 0.12), y23 = 1.0 / cd(0.02, 0.25), y13 = 1.0 / cd(0.015, 0.2);
  const cd c12(0, 0.01), c23(0, 0.02), c13(0, 0.015);
  const double t = 0.97;
  ComplexMatrix want(3, 3);
  want(0, 0) = y12 + c12 + y13 + c13;
  want(1, 1) = y12 + c12 + (y23 + c23) / (t * t);
  want(2, 2) = y23 + c23 + y13 + c13 + cd(0.9, -0.3) + cd(0, 0.05);
  want(0, 1) = want(1, 0) = -y12;
  want(0, 2) = want(2, 0) = -y13;
  want(1, 2) = want(2, 1) = -y23 / t;
  EXPECT_LT((y - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Admittance, ZeroImpedanceBranchIsRejected) {
  const CaseData data = parse_case(
      "bus 1 3 0 0 0 0\nbus 2 2 0 0 0 0\nbranch 1 2 0 0 0\ngen 1 0\n", CaseFormat::kNative);
  EXPECT_THROW(build_admittance(data, {}, false), ValidationError);
}

TEST(Kron, NothingToEliminate) {
  ComplexMatrix y(2, 2);
  y << cd(1, -5), cd(-1, 5), cd(-1, 5), cd(1, -5);
  const std::vector<std::size_t> keep{0, 1};
  EXPECT_EQ(kron_reduce(y, keep), y);
}

TEST(Kron, StarThroughOneInteriorBus) {
  // g1 -- b -- g2 with series admittances a and c and a shunt s at b.
  const cd a = 1.0 / cd(0.01, 0.1), c = 1.0 / cd(0.02, 0.3), s(0.5, -0.2);
  ComplexMatrix y(3, 3);
  y << a, 0, -a, 0, c, -c, -a, -c, a + c + s;
  const std::vector<std::size_t> keep{0, 1};
  const ComplexMatrix red = kron_reduce(y, keep);
  const cd d = a + c + s;
  EXPECT_LT(std::abs(red(0, 0) - (a - a * a / d)), 1e-10);
  EXPECT_LT(std::abs(red(1, 1) - (c - c * c / d)), 1e-10);
  EXPECT_LT(std::abs(red(0, 1) - (-a * c / d)), 1e-10);
  EXPECT_LT(std::abs(red(1, 0) - red(0, 1)), 1e-12);
}

TEST(Kron, FourBusHandElimination) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix y = ComplexMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        const cd yij = 1.0 / cd(0.1 * u(rng), u(rng));
        y(i, i) += yij;
        y(j, j) += yij;
        y(i, j) -= yij;
        y(j, i) -= yij;
      }
      y(i, i) += cd(0.1 * u(rng), -0.1 * u(rng));
    }
    for (const auto& keep : std::vector<std::vector<std::size_t>>{{0, 1}, {1, 3}, {0, 2, 3}, {2}}) {
      std::vector<std::size_t> drop;
      for (std::size_t k = 0; k < 4; ++k)
        if (std::find(keep.begin(), keep.end(), k) == keep.end()) drop.push_back(k);
      const ComplexMatrix got = kron_reduce(y, keep);
      const ComplexMatrix want = eliminate_by_hand(y, drop);
      EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Kron, SingularInteriorThrows) {
  ComplexMatrix y = ComplexMatrix::Zero(3, 3);
  y(0, 0) = cd(0, -1);
  y(1, 1) = cd(0, -1);
  const std::vector<std::size_t> keep{0, 1};
  EXPECT_THROW(kron_reduce(y, keep), ReductionError);
}

TEST(Kron, ReduceNetworkMatchesHandElimination) {
  const CaseData data = toy_case();
  const ComplexMatrix y = build_admittance(data, {}, false);
  const std::vector<double> xdp{0.2, 0.3};
  // Internal nodes 3, 4 behind x'd at buses 0, 1.
  ComplexMatrix aug = ComplexMatrix::Zero(5, 5);
  aug.topLeftCorner(3, 3) = y;
  for (int g = 0; g < 2; ++g) {
    const cd yd = 1.0 / cd(0, xdp[g]);
    aug(g, g) += yd;
    aug(3 + g, 3 + g) += yd;
    aug(g, 3 + g) -= yd;
    aug(3 + g, g) -= yd;
  }
  const ComplexMatrix want = eliminate_by_hand(aug, {0, 1, 2});
  const ComplexMatrix got = reduce_network(y, data, xdp);
  EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Modes, Fixture118Shape) {
  const auto& f = fixture118();
  EXPECT_EQ(f.modes.mode_count(), 2u);
  EXPECT_EQ(f.modes.phase_dim(), 53u);
  EXPECT_EQ(f.modes.state_dim(), 106u);
  for (ModeId m = 1; m <= 2; ++m) {
    const auto& net = f.modes.network(m);
    EXPECT_LT((net.magnitude - net.magnitude.transpose()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Modes, ZeroStateIsEquilibriumOfModeOne) {
  const auto& f = fixture118();
  const State zero = State::Zero(106);
  EXPECT_LE(dynamics(f.modes, 1, zero).norm(), 1e-12);
  const ModeSet toy = toy_modes();
  EXPECT_LE(dynamics(toy, 1, State::Zero(2)).norm(), 1e-12);
}

TEST(Modes, ModesDiffer) {
  const auto& f = fixture118();
  EXPECT_GT((dynamics(f.modes, 1, f.x0) - dynamics(f.modes, 2, f.x0)).norm(), 0.0);
}

TEST(Modes, CoverageViolationRejected) {
  const auto& f = fixture118();
  EXPECT_THROW(build_modes(f.data, Placement{{f.placement.lines[0]}}, {}), ValidationError);
}

TEST(Modes, ToyMechanicalPowerFromHandEvaluation) {
  const CaseData data = toy_case();
  const ComplexMatrix red = reduce_network(build_admittance(data, Placement{{0}}, false), data,
                                           std::vector<double>{0.2, 0.2});
  const ModeSet modes = toy_modes();
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const double pm = red(i, i).real() + std::abs(red(i, j)) * std::cos(-std::arg(red(i, j)));
    EXPECT_NEAR(modes.mechanical_power()(i), pm, 1e-12);
  }
}

// P_e from |Y| and psi, evaluated term by term.
Eigen::VectorXd literal_pe(const ComplexMatrix& y, const Eigen::VectorXd& e,
                           const Eigen::VectorXd& delta) {
  const Eigen::Index n = y.rows();
  Eigen::VectorXd pe(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    pe(i) = e(i) * e(i) * y(i, i).real();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      pe(i) += e(i) * e(j) * std::abs(y(i, j)) * std::cos(delta(i) - delta(j) - std::arg(y(i, j)));
    }
  }
  return pe;
}

TEST(Dynamics, GenericTwoMachineByHand) {
  // |Y_12| = 4, psi_12 = 1.4, G_11 = 0.3, G_22 = 0.2, E = (1.05, 0.98), H = (5, 3).
  ComplexMatrix y(2, 2);
  y << cd(0.3, -4.1), std::polar(4.0, 1.4), std::polar(4.0, 1.4), cd(0.2, -3.9);
  ComplexMatrix y2 = y;
  y2(0, 1) = y2(1, 0) = std::polar(2.0, 1.45);
  Eigen::VectorXd e(2), h(2);
  e << 1.05, 0.98;
  h << 5.0, 3.0;
  const double ws = 2 * std::numbers::pi * 60;
  const ModeSet modes({y, y2}, e, h, ws, 0);

  const Eigen::VectorXd pm = literal_pe(y, e, Eigen::VectorXd::Zero(2));
  for (ModeId m = 1; m <= 2; ++m) {
    State x(2);
    x << 0.37, -0.8;
    Eigen::VectorXd delta(2);
    delta << 0.0, 0.37;
    const Eigen::VectorXd pe = literal_pe(m == 1 ? y : y2, e, delta);
    const State dx = dynamics(modes, m, x);
    EXPECT_DOUBLE_EQ(dx(0), -0.8);
    EXPECT_NEAR(dx(1), ws / (2 * 3.0) * (pm(1) - pe(1)), 1e-10);
  }
}

TEST(Dynamics, SusceptiveCouplingVanishesAtEqualPhases) {
  ComplexMatrix y(2, 2);
  y << cd(0.25, -5), cd(0, 5), cd(0, 5), cd(0.25, -5);
  Eigen::VectorXd e(2), h(2);
  e << 1.1, 1.1;
  h << 3, 3;
  const ModeSet modes({y, y}, e, h, 377.0, 0);
  Eigen::VectorXd phases(2);
  phases << 0.0, 0.0;
  const Eigen::VectorXd pe = electrical_power(modes, 1, phases);
  EXPECT_NEAR(pe(0), 1.21 * 0.25, 1e-14);
  EXPECT_NEAR(pe(1), 1.21 * 0.25, 1e-14);
}

TEST(Dynamics, NonFiniteStateThrows) {
  const ModeSet modes = toy_modes();
  State x(2);
  x << std::nan(""), 0.0;
  EXPECT_THROW(dynamics(modes, 1, x), NumericError);
}

TEST(Dynamics, JacobianBlockStructure) {
  const auto& f = fixture118();
  const Eigen::MatrixXd jac = dynamics_jacobian(f.modes, 2, f.x0);
  EXPECT_EQ(jac.topLeftCorner(53, 53).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(jac.topRightCorner(53, 53).isIdentity(0.0));
  EXPECT_EQ(jac.bottomRightCorner(53, 53).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Dynamics, JacobianMatchesCentralDifferences) {
  const auto& f = fixture118();
  std::mt19937_64 seeds(11);
  for (int trial = 0; trial < 10; ++trial) {
    const State x = perturb(State::Zero(106), 0.3, seeds());
    for (ModeId m = 1; m <= 2; ++m) {
      const Eigen::MatrixXd jac = dynamics_jacobian(f.modes, m, x);
      Eigen::MatrixXd fd(106, 106);
      const double h = 1e-6;
      for (int k = 0; k < 106; ++k) {
        State xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        fd.col(k) = (dynamics(f.modes, m, xp) - dynamics(f.modes, m, xm)) / (2 * h);
      }
      EXPECT_LE((jac - fd).norm() / jac.norm(), 1e-6);
    }
  }
}

TEST(Dynamics, TransposeProductMatchesDenseJacobian) {
  const auto& f = fixture118();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 5; ++trial) {
    const State x = perturb(State::Zero(106), 0.5, rng());
    Eigen::VectorXd v(106), out(106);
    for (auto& c : v) c = n01(rng);
    for (ModeId m = 1; m <= 2; ++m) {
      f.modes.jacobian_transpose_product(m, x, v, out);
      const Eigen::VectorXd want = dynamics_jacobian(f.modes, m, x).transpose() * v;
      EXPECT_LE((out - want).norm(), 1e-11 * want.norm());
    }
  }
}

TEST(Dynamics, FullPhaseJacobianRowsSumToZero) {
  const auto& f = fixture118();
  const Eigen::VectorXd phases = full_phases(f.modes, f.x0);
  for (ModeId m = 1; m <= 2; ++m) {
    const Eigen::MatrixXd dp = electrical_power_jacobian(f.modes, m, phases);
    EXPECT_LE(dp.rowwise().sum().cwiseAbs().maxCoeff(), 1e-10 * dp.cwiseAbs().maxCoeff());
    // Shifting every machine by the same angle leaves P_e alone.
    const Eigen::VectorXd shifted = (phases.array() + 0.7).matrix();
    EXPECT_LE((electrical_power(f.modes, m, shifted) - electrical_power(f.modes, m, phases))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-10);
  }
}

TEST(Perturb, Contract) {
  const State zero = State::Zero(106);
  EXPECT_EQ(perturb(zero, 0.0, 3), zero);
  EXPECT_EQ(perturb(zero, 0.3, 3), perturb(zero, 0.3, 3));
  EXPECT_NE(perturb(zero, 0.3, 3), perturb(zero, 0.3, 4));
  EXPECT_THROW(perturb(zero, -0.1, 3), ValidationError);
  EXPECT_EQ(perturb(zero, 0.3, 3).tail(53).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Perturb, UniformStatistics) {
  const State big = perturb(State::Zero(20000), 0.3, 99);
  const auto phases = big.head(10000).cwiseAbs();
  EXPECT_LE(phases.maxCoeff(), 0.3);
  EXPECT_NEAR(phases.mean(), 0.15, 0.15 * 0.05);
}

}  // namespace
}  // namespace gridswitch

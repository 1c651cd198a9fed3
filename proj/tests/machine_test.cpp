// Copyright 2026 The jcprog Authors
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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "jcprog/machine.hpp"
#include "jcprog/sequence.hpp"
#include "test_support.hpp"

namespace jcprog {
namespace {

using std::numbers::pi;
using std::numbers::sqrt2;
using testing::joint_ket;

/// Entangler on the subspace written down state by state: the {|e,0>,
/// |g,1>} doublet of the addressed mode turns by pi*sqrt(2), everything
/// else is fixed.
SubspaceMatrix entangler_oracle(Mode mode) {
  const double c = std::cos(pi * sqrt2);
  const double s = std::sin(pi * sqrt2);
  SubspaceMatrix u = SubspaceMatrix::Zero();
  for (int j = 0; j < kSubspaceDim; ++j) {
    const BasisLabel l = SubspaceBasis::label(j);
    const int n = mode == Mode::kFirst ? l.mode1 : l.mode2;
    const bool doublet = (l.qubit == 1 && n == 0) || (l.qubit == 0 && n == 1);
    if (!doublet) {
      u(j, j) = 1.0;
      continue;
    }
    BasisLabel partner = l;
    partner.qubit = 1 - l.qubit;
    (mode == Mode::kFirst ? partner.mode1 : partner.mode2) = 1 - n;
    u(j, j) = c;
    u(SubspaceBasis::index_of(partner), j) = -kI * s;
  }
  return u;
}

TEST(SubspaceBasis, IndexOrder) {
  EXPECT_EQ(SubspaceBasis::index_of(1, 1, 1), 0);
  EXPECT_EQ(SubspaceBasis::index_of(0, 0, 0), 7);
  EXPECT_EQ(SubspaceBasis::index_of(1, 0, 1), 2);
  EXPECT_EQ(SubspaceBasis::ket(0), "|111>");
  for (int i = 0; i < kSubspaceDim; ++i) {
    EXPECT_EQ(SubspaceBasis::index_of(SubspaceBasis::label(i)), i);
  }
}

TEST(Entangler, GroundZeroPhotonUnchanged) {
  const JointSpace space(3);
  const ComplexMatrix a = entangler(Mode::kFirst, 3);
  for (int n2 = 0; n2 <= 3; ++n2) {
    const ComplexVector v = joint_ket(space, 0, n2, 0);
    EXPECT_LT(max_abs(a * v - v), 1e-14) << "n2 " << n2;
  }
}

TEST(Entangler, ExcitedOnePhotonTrapped) {
  const JointSpace space(3);
  const ComplexMatrix a = entangler(Mode::kFirst, 3);
  for (int n2 = 0; n2 <= 3; ++n2) {
    const ComplexVector v = joint_ket(space, 1, n2, 1);
    EXPECT_LT(max_abs(a * v - v), 1e-12) << "n2 " << n2;
  }
}

TEST(Entangler, DoubletRotation) {
  const JointSpace space(3);
  const ComplexMatrix a = entangler(Mode::kFirst, 3);
  for (int n2 = 0; n2 <= 1; ++n2) {
    const ComplexVector out = a * joint_ket(space, 1, n2, 0);
    const Complex diag = out(space.index(1, n2, 0));
    const Complex off = out(space.index(0, n2, 1));
    EXPECT_NEAR(diag.real(), -0.26625, 1e-5);
    EXPECT_NEAR(off.imag(), 0.96390, 1e-5);
    EXPECT_NEAR(std::abs(diag - std::cos(pi * sqrt2)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(off + kI * std::sin(pi * sqrt2)), 0.0, 1e-13);
  }
}

TEST(Entangler, RestrictedBlocksMatchOracle) {
  for (int n_max : {2, 3, 4}) {
    for (Mode mode : {Mode::kFirst, Mode::kSecond}) {
      const RestrictedBlock r = restrict_to_subspace(entangler(mode, n_max), n_max);
      EXPECT_LT(r.leakage, 1e-10) << "n_max " << n_max;
      EXPECT_LT(max_abs(r.block - entangler_oracle(mode)), 1e-12) << "n_max " << n_max;
      EXPECT_TRUE(check_unitary(r.block, 1e-10).pass);
    }
  }
}

TEST(Entangler, CachedBlocksMatchOracle) {
  const PrimitiveBlocks& b = PrimitiveBlocks::instance();
  EXPECT_LT(max_abs(b.entangler(Mode::kFirst) - entangler_oracle(Mode::kFirst)), 1e-12);
  EXPECT_LT(max_abs(b.entangler(Mode::kSecond) - entangler_oracle(Mode::kSecond)), 1e-12);
}

TEST(Entangler, TruncationBelowTrappingLevelRejected) {
  EXPECT_THROW(entangler(Mode::kFirst, 1), ConfigurationError);
  MachineConfig config;
  config.n_max = 1;
  EXPECT_THROW(entangler(Mode::kSecond, config), ConfigurationError);
}

TEST(Entangler, SquareIsNotIdentity) {
  const SubspaceMatrix a = PrimitiveBlocks::instance().entangler(Mode::kFirst);
  EXPECT_LT(trace_fidelity(a * a, SubspaceMatrix::Identity()), 0.99);
}

TEST(Entangler, BrokenTrappingLeaks) {
  const RestrictedBlock r =
      restrict_to_subspace(coupling_evolution(Mode::kFirst, 0.9 * kEntanglerAngle, 3), 3);
  EXPECT_GT(r.leakage, 0.1);
}

TEST(QubitRotation, ZeroAngleIsIdentity) {
  EXPECT_LT(max_abs(qubit_rotation(Axis::kX, 0.0, 3) - JointSpace(3).identity()), 1e-15);
}

TEST(QubitRotation, HalfTurnAboutZIsMinusIdentity) {
  EXPECT_LT(max_abs(qubit_rotation(Axis::kZ, pi, 3) + JointSpace(3).identity()), 1e-14);
}

TEST(QubitRotation, EighthTurnAboutX) {
  const JointSpace space(3);
  const ComplexVector out = qubit_rotation(Axis::kX, pi / 4, 3) * joint_ket(space, 0, 0, 0);
  ComplexVector expected = std::cos(pi / 4) * joint_ket(space, 0, 0, 0) -
                           kI * std::sin(pi / 4) * joint_ket(space, 1, 0, 0);
  EXPECT_LT(max_abs(out - expected), 1e-15);
}

TEST(QubitRotation, SigmaZSignConvention) {
  // sigma_z = 2 sigma- sigma+ - 1 is +1 on |g> (index 0).
  const ComplexMatrix z = pauli(Axis::kZ);
  EXPECT_EQ(z(0, 0), Complex(1.0));
  EXPECT_EQ(z(1, 1), Complex(-1.0));
  EXPECT_EQ(pauli(Axis::kZ, -1), -z);
  EXPECT_EQ(sigma_plus()(1, 0), Complex(1.0));
}

TEST(QubitRotation, Periodicity) {
  // exp(-i sigma P) has period 2 pi and changes sign under sigma -> sigma + pi.
  auto rng = make_stream(5, 0);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int trial = 0; trial < 20; ++trial) {
    const double s = angle(rng);
    for (Axis axis : {Axis::kX, Axis::kY, Axis::kZ}) {
      const ComplexMatrix u = qubit_rotation(axis, s, 2);
      EXPECT_LT(max_abs(qubit_rotation(axis, s + pi, 2) + u), 1e-12);
      EXPECT_LT(max_abs(qubit_rotation(axis, s + 2 * pi, 2) - u), 1e-12);
    }
  }
}

TEST(FreePhase, SignsOnSubspace) {
  const int n_max = 3;
  const JointSpace space(n_max);
  const ComplexMatrix u = free_phase(pi, n_max);
  for (int q = 0; q < 2; ++q) {
    const int k01 = space.index(q, 0, 1);
    const int k11 = space.index(q, 1, 1);
    EXPECT_LT(std::abs(u(k01, k01) + 1.0), 1e-15);
    EXPECT_LT(std::abs(u(k11, k11) - 1.0), 1e-15);
  }
}

TEST(FreePhase, WholeTurnsAreIdentityOnSubspace) {
  for (int n = -3; n <= 3; ++n) {
    const RestrictedBlock r = restrict_to_subspace(free_phase(2 * pi * n, 3), 3);
    EXPECT_LT(max_abs(r.block - SubspaceMatrix::Identity()), 1e-12) << "n " << n;
    EXPECT_EQ(r.leakage, 0.0);
  }
}

TEST(FreePhase, CommutesWithSubspaceProjector) {
  const ComplexMatrix p = subspace_projector(3).cast<Complex>();
  const ComplexMatrix pp = p.adjoint() * p;
  for (double phi : {0.3, 1.1, -2.7}) {
    EXPECT_LT(max_abs(commutator(free_phase(phi, 3), pp)), 1e-12);
  }
}

TEST(Restrict, IdentityHasNoLeakage) {
  const RestrictedBlock r = restrict_to_subspace(JointSpace(3).identity(), 3);
  EXPECT_EQ(r.block, SubspaceMatrix::Identity());
  EXPECT_EQ(r.leakage, 0.0);
}

TEST(Restrict, DimensionMismatchRejected) {
  EXPECT_THROW(restrict_to_subspace(JointSpace(2).identity(), 3), UsageError);
}

TEST(Primitives, RandomDrawsStayInSubspace) {
  auto rng = make_stream(17, 0);
  std::uniform_real_distribution<double> angle(-2 * pi, 2 * pi);
  const int n_max = 3;
  for (int draw = 0; draw < 50; ++draw) {
    std::vector<ComplexMatrix> primitives = {
        entangler(Mode::kFirst, n_max), entangler(Mode::kSecond, n_max),
        qubit_rotation(Axis::kX, angle(rng), n_max), qubit_rotation(Axis::kY, angle(rng), n_max),
        qubit_rotation(Axis::kZ, angle(rng), n_max), free_phase(angle(rng), n_max)};
    for (std::size_t k = 0; k < primitives.size(); ++k) {
      const RestrictedBlock r = restrict_to_subspace(primitives[k], n_max);
      EXPECT_LT(r.leakage, 1e-10) << "draw " << draw << " primitive " << k;
      EXPECT_TRUE(check_unitary(r.block, 1e-9).pass) << "draw " << draw << " primitive " << k;
    }
  }
}

TEST(MachineConfig, OffResonanceRatio) {
  MachineConfig config;
  EXPECT_DOUBLE_EQ(config.off_resonance_ratio(), 0.01);
  EXPECT_FALSE(config.off_resonance_warning());
  config.half_detuning = 4.0 * config.rabi_1;
  EXPECT_TRUE(config.off_resonance_warning());
}

TEST(MachineConfig, ValidationRejectsNonPositive) {
  MachineConfig config;
  config.rabi_2 = 0.0;
  EXPECT_THROW(config.validate(), ConfigurationError);
  config = {};
  config.half_detuning = -1.0;
  EXPECT_THROW(config.validate(), ConfigurationError);
}

}  // namespace
}  // namespace jcprog

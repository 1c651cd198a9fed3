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

/**
 * @file
 * The two-mode machine: one qubit coupled to two cavity modes, its six
 * primitive unitaries, and the 8-dimensional computational subspace they
 * leave invariant.
 *
 * Joint space ordering is qubit (x) mode 2 (x) mode 1, so a full-space basis
 * state |q, n2, n1> sits at index q*(n_max+1)^2 + n2*(n_max+1) + n1. Qubit
 * index 0 is the ground state |g>, index 1 the excited state |e>, and
 * sigma+ = |e><g|. The Pauli matrices follow
 *
 *   sigma_x = sigma- + sigma+,
 *   sigma_y = i sigma- - i sigma+,
 *   sigma_z = 2 sigma- sigma+ - 1,
 *
 * which makes sigma_z = +1 on |g> and -1 on |e>.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "jcprog/fock.hpp"

namespace jcprog {

/// Dense operator on the 8-dimensional subspace.
using SubspaceMatrix = Eigen::Matrix<Complex, 8, 8>;

inline constexpr int kSubspaceDim = 8;
inline constexpr int kDefaultNMax = 3;
inline constexpr int kTrappingLevel = 2;

/// Rotation angle of the |e,0> <-> |g,1> doublet during one entangler. The
/// |e,1> <-> |g,2> doublet turns by sqrt(2) times this, i.e. exactly 2 pi.
inline const double kEntanglerAngle = std::numbers::pi * std::numbers::sqrt2;

enum class Axis { kX, kY, kZ };

/// Cavity mode addressed by an entangler: mode 1 carries operator a
/// (entangler A), mode 2 carries operator b (entangler B).
enum class Mode { kFirst = 1, kSecond = 2 };

inline const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::kX: return "x";
    case Axis::kY: return "y";
    case Axis::kZ: return "z";
  }
  return "?";
}

/// Physical parameters of the two-mode machine. Frequencies are angular
/// (rad/s).
struct MachineConfig {
  double rabi_1 = 1e8;
  double rabi_2 = 1e8;
  double half_detuning = 5e9;
  int n_max = kDefaultNMax;

  /// max(rabi_1, rabi_2) / (2 half_detuning); the size of the neglected
  /// off-resonant corrections.
  double off_resonance_ratio() const {
    return std::max(rabi_1, rabi_2) / (2.0 * half_detuning);
  }
  bool off_resonance_warning() const { return off_resonance_ratio() > 0.1; }

  double rabi(Mode mode) const { return mode == Mode::kFirst ? rabi_1 : rabi_2; }

  void validate() const {
    if (!(rabi_1 > 0.0) || !(rabi_2 > 0.0)) {
      throw ConfigurationError("MachineConfig: Rabi frequencies must be positive");
    }
    if (!(half_detuning > 0.0)) {
      throw ConfigurationError("MachineConfig: half_detuning must be positive");
    }
    if (n_max < 1) throw ConfigurationError("MachineConfig: n_max must be >= 1");
  }
};

/// Embeds qubit and single-mode operators into the joint truncated space.
class JointSpace {
 public:
  explicit JointSpace(int n_max) : n_max_(n_max), levels_(n_max + 1) {
    if (n_max < 0) throw UsageError("JointSpace: n_max must be >= 0");
  }

  int n_max() const { return n_max_; }
  int levels() const { return levels_; }
  int dim() const { return 2 * levels_ * levels_; }

  int index(int q, int n2, int n1) const { return (q * levels_ + n2) * levels_ + n1; }

  ComplexMatrix embed_qubit(const ComplexMatrix& op) const {
    return tensor_product({op, mode_identity(), mode_identity()});
  }
  ComplexMatrix embed_mode(Mode mode, const ComplexMatrix& op) const {
    return mode == Mode::kFirst
               ? tensor_product({qubit_identity(), mode_identity(), op})
               : tensor_product({qubit_identity(), op, mode_identity()});
  }
  ComplexMatrix embed(const ComplexMatrix& qubit_op, Mode mode,
                      const ComplexMatrix& mode_op) const {
    return mode == Mode::kFirst
               ? tensor_product({qubit_op, mode_identity(), mode_op})
               : tensor_product({qubit_op, mode_op, mode_identity()});
  }
  ComplexMatrix identity() const { return ComplexMatrix::Identity(dim(), dim()); }

 private:
  static ComplexMatrix qubit_identity() { return ComplexMatrix::Identity(2, 2); }
  ComplexMatrix mode_identity() const { return ComplexMatrix::Identity(levels_, levels_); }

  int n_max_;
  int levels_;
};

// Qubit operators, |g> = index 0.
inline ComplexMatrix sigma_minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}
inline ComplexMatrix sigma_plus() { return sigma_minus().adjoint(); }

/// Pauli matrix for `axis`; `z_sign` = -1 selects the opposite sigma_z
/// convention and leaves x and y untouched.
inline ComplexMatrix pauli(Axis axis, int z_sign = 1) {
  const ComplexMatrix sm = sigma_minus();
  const ComplexMatrix sp = sigma_plus();
  switch (axis) {
    case Axis::kX: return sm + sp;
    case Axis::kY: return kI * sm - kI * sp;
    case Axis::kZ:
      return static_cast<double>(z_sign) *
             (2.0 * sm * sp - ComplexMatrix::Identity(2, 2));
  }
  throw UsageError("pauli: unknown axis");
}

/// a^dagger sigma- + a sigma+ for the given mode in the joint space.
inline ComplexMatrix coupling_generator(Mode mode, int n_max) {
  const JointSpace space(n_max);
  const ModeOperators ops = build_mode_operators(n_max);
  return space.embed(sigma_minus(), mode, ops.creation) +
         space.embed(sigma_plus(), mode, ops.annihilation);
}

/// exp(-i angle (a^dagger sigma- + a sigma+)) without any trapping check.
inline ComplexMatrix coupling_evolution(Mode mode, double angle, int n_max) {
  return matrix_exponential(coupling_generator(mode, n_max), angle);
}

/// The resonant entangler A (mode 1) or B (mode 2) at the trapping pulse
/// area.
inline ComplexMatrix entangler(Mode mode, int n_max) {
  if (n_max < kTrappingLevel) {
    throw ConfigurationError("entangler: n_max must be >= 2 so the trapping level exists");
  }
  return coupling_evolution(mode, kEntanglerAngle, n_max);
}

inline ComplexMatrix entangler(Mode mode, const MachineConfig& config) {
  return entangler(mode, config.n_max);
}

/// exp(-i sigma * pauli(axis)) on the qubit, identity on both modes.
inline ComplexMatrix qubit_rotation(Axis axis, double sigma, int n_max, int z_sign = 1) {
  const JointSpace space(n_max);
  return space.embed_qubit(matrix_exponential(pauli(axis, z_sign), sigma));
}

/// exp(-i phase (n1 - n2)); diagonal.
inline ComplexMatrix free_phase(double phase, int n_max) {
  const JointSpace space(n_max);
  ComplexMatrix u = ComplexMatrix::Zero(space.dim(), space.dim());
  for (int q = 0; q < 2; ++q) {
    for (int n2 = 0; n2 <= n_max; ++n2) {
      for (int n1 = 0; n1 <= n_max; ++n1) {
        const int k = space.index(q, n2, n1);
        u(k, k) = std::exp(-kI * phase * static_cast<double>(n1 - n2));
      }
    }
  }
  return u;
}

/// Label of one computational basis vector |q n2 n1>, each entry 0 or 1.
struct BasisLabel {
  int qubit;
  int mode2;
  int mode1;
  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

/// The computational basis in its published order |111>, |110>, ..., |000>,
/// i.e. index = 7 - (4q + 2 n2 + n1).
struct SubspaceBasis {
  static constexpr int index_of(int q, int n2, int n1) { return 7 - (4 * q + 2 * n2 + n1); }
  static constexpr int index_of(const BasisLabel& l) { return index_of(l.qubit, l.mode2, l.mode1); }

  static constexpr BasisLabel label(int index) {
    const int code = 7 - index;
    return BasisLabel{(code >> 2) & 1, (code >> 1) & 1, code & 1};
  }

  static std::array<BasisLabel, kSubspaceDim> labels() {
    std::array<BasisLabel, kSubspaceDim> out{};
    for (int i = 0; i < kSubspaceDim; ++i) out[i] = label(i);
    return out;
  }

  static std::string ket(int index) {
    const BasisLabel l = label(index);
    return "|" + std::to_string(l.qubit) + std::to_string(l.mode2) +
           std::to_string(l.mode1) + ">";
  }
};

/// Isometry P (8 x dim) mapping the joint space onto the subspace basis.
inline Eigen::MatrixXd subspace_projector(int n_max) {
  if (n_max < 1) throw UsageError("subspace_projector: n_max must be >= 1");
  const JointSpace space(n_max);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(kSubspaceDim, space.dim());
  for (int i = 0; i < kSubspaceDim; ++i) {
    const BasisLabel l = SubspaceBasis::label(i);
    p(i, space.index(l.qubit, l.mode2, l.mode1)) = 1.0;
  }
  return p;
}

struct RestrictedBlock {
  SubspaceMatrix block;
  /// Spectral norm of (1 - P^dagger P) U P^dagger.
  double leakage = 0.0;
};

/// Restricts a full-space operator to the computational subspace and
/// measures how strongly it couples the subspace to its complement.
inline RestrictedBlock restrict_to_subspace(const ComplexMatrix& u_full, int n_max) {
  const JointSpace space(n_max);
  if (u_full.rows() != space.dim() || u_full.cols() != space.dim()) {
    throw UsageError("restrict: operator dimension does not match n_max");
  }
  const ComplexMatrix p = subspace_projector(n_max).cast<Complex>();
  RestrictedBlock out;
  const ComplexMatrix embedded = u_full * p.adjoint();
  out.block = p * embedded;
  const ComplexMatrix off_block = embedded - p.adjoint() * out.block;
  if (max_abs(off_block) == 0.0) {
    out.leakage = 0.0;
  } else {
    Eigen::JacobiSVD<ComplexMatrix> svd(off_block);
    out.leakage = svd.singularValues()(0);
  }
  return out;
}

inline RestrictedBlock restrict_to_subspace(const ComplexMatrix& u_full,
                                            const MachineConfig& config) {
  return restrict_to_subspace(u_full, config.n_max);
}

/// Restricted blocks of the primitives, computed once at the default
/// truncation. Exact because every primitive leaves the subspace invariant.
struct PrimitiveBlocks {
  SubspaceMatrix entangler_a;
  SubspaceMatrix entangler_b;
  /// Restricted Pauli matrices, indexed by Axis; each squares to identity.
  std::array<SubspaceMatrix, 3> pauli;
  /// Restricted coupling generators for modes 1 and 2.
  SubspaceMatrix coupling_a;
  SubspaceMatrix coupling_b;

  const SubspaceMatrix& entangler(Mode mode) const {
    return mode == Mode::kFirst ? entangler_a : entangler_b;
  }

  /// exp(-i sigma P) = cos(sigma) I - i sin(sigma) P.
  SubspaceMatrix rotation(Axis axis, double sigma, int z_sign = 1) const {
    const double s = axis == Axis::kZ ? sigma * z_sign : sigma;
    return std::cos(s) * SubspaceMatrix::Identity() -
           kI * std::sin(s) * pauli[static_cast<int>(axis)];
  }

  static const PrimitiveBlocks& instance() {
    static const PrimitiveBlocks blocks = build();
    return blocks;
  }

 private:
  static PrimitiveBlocks build() {
    const int n_max = kDefaultNMax;
    const JointSpace space(n_max);
    const ComplexMatrix p = subspace_projector(n_max).cast<Complex>();
    PrimitiveBlocks b;
    b.entangler_a = restrict_to_subspace(jcprog::entangler(Mode::kFirst, n_max), n_max).block;
    b.entangler_b = restrict_to_subspace(jcprog::entangler(Mode::kSecond, n_max), n_max).block;
    for (Axis axis : {Axis::kX, Axis::kY, Axis::kZ}) {
      b.pauli[static_cast<int>(axis)] = p * space.embed_qubit(jcprog::pauli(axis)) * p.adjoint();
    }
    b.coupling_a = p * coupling_generator(Mode::kFirst, n_max) * p.adjoint();
    b.coupling_b = p * coupling_generator(Mode::kSecond, n_max) * p.adjoint();
    return b;
  }
};

}  // namespace jcprog

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
 * Control sequences: alternating entanglers and qubit rotations, their
 * evaluation on the computational subspace, the two published 72-step
 * parameter sets, and phase-invariant verification against target gates.
 */

#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jcprog/machine.hpp"

namespace jcprog {

using Entangler = Mode;  // A acts on mode 1, B on mode 2.

inline const char* entangler_name(Entangler e) { return e == Mode::kFirst ? "A" : "B"; }

/// One machine instruction: entangler first, then a rotation about `axis`
/// by `sigma` radians.
struct Step {
  Entangler entangler = Mode::kFirst;
  Axis axis = Axis::kX;
  double sigma = 0.0;
  friend bool operator==(const Step&, const Step&) = default;
};

/// A repeating (entangler, axis) cycle.
struct PatternSlot {
  Entangler entangler;
  Axis axis;
  friend bool operator==(const PatternSlot&, const PatternSlot&) = default;
};
using Pattern = std::vector<PatternSlot>;

/// A/x, B/y, A/z repeated: the printed structure of the 72-step product.
inline Pattern canonical_pattern() {
  return {{Mode::kFirst, Axis::kX}, {Mode::kSecond, Axis::kY}, {Mode::kFirst, Axis::kZ}};
}

/// A/x, B/y alternating; uses only two of the three Pauli axes.
inline Pattern two_axis_pattern() {
  return {{Mode::kFirst, Axis::kX}, {Mode::kSecond, Axis::kY}};
}

enum class SigmaOrder {
  kAsListed,  // sigmas[k] belongs to steps[k]
  kReversed,  // sigmas[k] belongs to steps[size - 1 - k]
};

inline const char* to_string(SigmaOrder order) {
  return order == SigmaOrder::kAsListed ? "as_listed" : "reversed";
}

/// How the stored numbers map onto physical rotations.
struct Convention {
  SigmaOrder sigma_order = SigmaOrder::kAsListed;
  int sigma_z_sign = 1;
  friend bool operator==(const Convention&, const Convention&) = default;
};

/// steps[0] is applied first (rightmost factor of the operator product).
struct ControlSequence {
  std::string name;
  std::vector<Step> steps;
  Convention convention;

  std::size_t size() const { return steps.size(); }

  std::vector<double> sigmas() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const Step& s : steps) out.push_back(s.sigma);
    return out;
  }

  /// Steps with the convention applied: sigma order resolved and z angles
  /// expressed in the library's sigma_z convention.
  std::vector<Step> effective_steps() const {
    std::vector<Step> out = steps;
    if (convention.sigma_order == SigmaOrder::kReversed) {
      const std::size_t n = steps.size();
      for (std::size_t k = 0; k < n; ++k) out[k].sigma = steps[n - 1 - k].sigma;
    }
    if (convention.sigma_z_sign < 0) {
      for (Step& s : out) {
        if (s.axis == Axis::kZ) s.sigma = -s.sigma;
      }
    }
    return out;
  }

  friend bool operator==(const ControlSequence&, const ControlSequence&) = default;
};

/// Lays `sigmas` onto `pattern`, repeating the pattern cyclically.
inline ControlSequence make_sequence(const Pattern& pattern, std::span<const double> sigmas,
                                     std::string name = {}) {
  if (pattern.empty() && !sigmas.empty()) throw UsageError("make_sequence: empty pattern");
  ControlSequence seq;
  seq.name = std::move(name);
  seq.steps.reserve(sigmas.size());
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const PatternSlot& slot = pattern[k % pattern.size()];
    seq.steps.push_back({slot.entangler, slot.axis, sigmas[k]});
  }
  return seq;
}

namespace published {

// Values in printed order.
inline constexpr std::array<double, 72> kCnotSigmas = {
    -0.2872, 0.1842,  -0.5489, 0.2484,  0.0132,  -0.1134, -0.5642, -0.5800, -2.4470,
    -0.0432, 0.3052,  0.0869,  0.5365,  0.6245,  -0.7469, -0.5959, -0.9621, -2.0245,
    -0.0107, 0.3731,  0.0410,  0.3369,  0.4287,  0.1212,  -0.6637, -0.1490, -2.5645,
    -0.0396, -0.0460, 0.1488,  0.2528,  0.4742,  0.9225,  -0.3419, -0.4538, -3.4287,
    -0.2260, 0.0561,  0.5803,  0.7112,  0.8276,  -0.1700, -0.1722, -0.6864, -2.6273,
    0.4602,  0.2338,  0.9878,  0.0751,  0.2090,  -0.1949, 0.1052,  -0.3791, -2.4825,
    0.5824,  0.3608,  0.69429, 1.0914,  0.2271,  0.2274,  -0.6667, -0.1907, -3.1813,
    0.3526,  -0.3946, 0.2783,  0.6658,  0.0545,  -0.4650, 0.0846,  -0.1140, -2.8158};

inline constexpr std::array<double, 72> kSwapSigmas = {
    -0.3520, 0.0423,  -0.1621, 0.4462,  0.4655,  0.4042,  0.2449,  -0.1200, -2.5231,
    0.077,   0.2609,  0.7865,  -0.1527, 0.2210,  -1.0893, 0.0321,  0.2538,  -1.7061,
    -0.0262, 0,       0.2744,  -0.2684, 0.5115,  0,       0.7084,  0.0365,  -2.2245,
    0.5371,  0.4411,  0.6516,  0.7463,  1.2677,  -0.4479, -0.4177, -0.3899, 0.3146,
    0.1395,  -0.3993, 0.2377,  0.0146,  0.3367,  0.3302,  -2.6975, -0.4906, -2.4926,
    -0.0343, 0.0802,  -0.1986, 0.6301,  0.5024,  0.8930,  -0.2323, -0.3366, -2.7822,
    0.3633,  0.3231,  0.2038,  0.0344,  0.3335,  -1.1079, -0.0373, 0.1819,  -2.3148,
    0.1895,  -0.1227, 0.4528,  0,       -0.3426, -0.3362, -0.3346, -0.3548, -2.0647};

}  // namespace published

inline ControlSequence canonical_cnot_sequence() {
  return make_sequence(canonical_pattern(), published::kCnotSigmas, "published-cnot-72");
}

inline ControlSequence canonical_swap_sequence() {
  return make_sequence(canonical_pattern(), published::kSwapSigmas, "published-swap-72");
}

/// Product of the restricted primitive blocks, steps[0] rightmost.
inline SubspaceMatrix evaluate(const ControlSequence& seq) {
  const PrimitiveBlocks& blocks = PrimitiveBlocks::instance();
  SubspaceMatrix u = SubspaceMatrix::Identity();
  for (const Step& step : seq.effective_steps()) {
    u = (blocks.rotation(step.axis, step.sigma) * blocks.entangler(step.entangler) * u).eval();
  }
  return u;
}

/// Same product, built in the full truncated space and restricted at the
/// end. Slow; used to cross-check `evaluate`.
inline RestrictedBlock evaluate_full_space(const ControlSequence& seq, int n_max) {
  const JointSpace space(n_max);
  ComplexMatrix u = space.identity();
  for (const Step& step : seq.effective_steps()) {
    u = qubit_rotation(step.axis, step.sigma, n_max) * entangler(step.entangler, n_max) * u;
  }
  return restrict_to_subspace(u, n_max);
}

// ---------------------------------------------------------------------------
// Targets

struct GateTarget {
  std::string name;
  SubspaceMatrix matrix;
};

namespace detail {
inline SubspaceMatrix permutation(const std::array<int, 8>& column_of_row) {
  SubspaceMatrix m = SubspaceMatrix::Zero();
  for (int r = 0; r < kSubspaceDim; ++r) m(r, column_of_row[r]) = 1.0;
  return m;
}
}  // namespace detail

/// Photonic C-NOT (mode 2 controls mode 1), identity on the qubit.
inline GateTarget cnot_target() {
  return {"cnot", detail::permutation({1, 0, 2, 3, 5, 4, 6, 7})};
}

/// The printed swap matrix, entry for entry. Under the basis ordering it
/// exchanges |110> <-> |100> and |011> <-> |001>, which is not a plain
/// qubit <-> mode exchange.
inline GateTarget swap_printed_target() {
  return {"swap-printed", detail::permutation({0, 3, 2, 1, 6, 5, 4, 7})};
}

/// Genuine exchange of the qubit with mode 1: |q n2 n1> -> |n1 n2 q>.
inline GateTarget swap_qubit_mode1_target() {
  SubspaceMatrix m = SubspaceMatrix::Zero();
  for (int col = 0; col < kSubspaceDim; ++col) {
    const BasisLabel l = SubspaceBasis::label(col);
    m(SubspaceBasis::index_of(l.mode1, l.mode2, l.qubit), col) = 1.0;
  }
  return {"swap-qubit-mode1", m};
}

inline GateTarget identity_target() { return {"identity", SubspaceMatrix::Identity()}; }

/// Looks up one of the built-in targets by name.
inline std::optional<GateTarget> named_target(const std::string& name) {
  if (name == "cnot") return cnot_target();
  if (name == "swap-printed") return swap_printed_target();
  if (name == "swap-qubit-mode1") return swap_qubit_mode1_target();
  if (name == "identity") return identity_target();
  return std::nullopt;
}

inline std::vector<std::string> named_target_names() {
  return {"cnot", "swap-printed", "swap-qubit-mode1", "identity"};
}

// ---------------------------------------------------------------------------
// Fidelity

/// |trace(V^dagger U)| / 8 without any unitarity check.
inline double trace_fidelity(const SubspaceMatrix& u, const SubspaceMatrix& v) {
  return std::abs((v.adjoint() * u).trace()) / kSubspaceDim;
}

/// Phase-invariant gate fidelity |trace(V^dagger U)| / 8.
inline double gate_fidelity(const SubspaceMatrix& u, const SubspaceMatrix& v) {
  if (!check_unitary(u, 1e-8).pass || !check_unitary(v, 1e-8).pass) {
    throw ContractViolation("gate_fidelity: arguments must be unitary within 1e-8");
  }
  return std::min(1.0, trace_fidelity(u, v));
}

// ---------------------------------------------------------------------------
// Verification

struct ReadingResult {
  Convention convention;
  double fidelity = 0.0;
  friend bool operator==(const ReadingResult&, const ReadingResult&) = default;
};

struct VerificationReport {
  std::string sequence_name;
  std::string target_name;
  double threshold = 0.98;
  std::vector<ReadingResult> readings;
  double best_fidelity = 0.0;
  Convention best_reading;
  bool reproduced = false;
  /// Unitary produced under the best reading; filled when not reproduced so
  /// the discrepancy can be inspected.
  std::optional<SubspaceMatrix> produced_unitary;
  std::string discrepancy;
  /// Invariant-form defect of the target (see reachability_defect); set by
  /// callers that run the reachability check.
  std::optional<double> target_reachability_defect;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// The four readings checked by `verify`: sigma order x sigma_z sign.
inline std::array<Convention, 4> enumerated_readings() {
  return {Convention{SigmaOrder::kAsListed, 1}, Convention{SigmaOrder::kAsListed, -1},
          Convention{SigmaOrder::kReversed, 1}, Convention{SigmaOrder::kReversed, -1}};
}

inline VerificationReport verify(const ControlSequence& seq, const GateTarget& target,
                                 double threshold = 0.98) {
  VerificationReport report;
  report.sequence_name = seq.name;
  report.target_name = target.name;
  report.threshold = threshold;
  SubspaceMatrix best_u = SubspaceMatrix::Identity();
  bool first = true;
  for (const Convention& reading : enumerated_readings()) {
    ControlSequence variant = seq;
    variant.convention = reading;
    const SubspaceMatrix u = evaluate(variant);
    const double f = gate_fidelity(u, target.matrix);
    report.readings.push_back({reading, f});
    if (first || f > report.best_fidelity) {
      report.best_fidelity = f;
      report.best_reading = reading;
      best_u = u;
      first = false;
    }
  }
  report.reproduced = report.best_fidelity >= threshold;
  if (!report.reproduced) {
    report.produced_unitary = best_u;
    report.discrepancy = "no reading of sequence '" + seq.name + "' reaches fidelity " +
                         std::to_string(threshold) + " against target '" + target.name +
                         "'; best " + std::to_string(report.best_fidelity) + " (" +
                         to_string(report.best_reading.sigma_order) + ", sigma_z sign " +
                         std::to_string(report.best_reading.sigma_z_sign) + ")";
  }
  return report;
}

// ---------------------------------------------------------------------------
// Qubit / photon factorization

using PhotonicMatrix = Eigen::Matrix<Complex, 4, 4>;

struct PhotonicFactor {
  /// Photonic operator in the basis |11>, |10>, |01>, |00> (mode 2, mode 1).
  PhotonicMatrix w;
  /// 1 - max_phi F(U, e^{i phi} I2 (x) W).
  double residual = 0.0;
};

/// Closest factorization U ~ I2 (x) W. With the qubit as the most
/// significant basis index, I2 (x) W is block diagonal, and the best W is
/// the unitary polar factor of the sum of the two diagonal 4x4 blocks.
/// Returns nullopt when the residual exceeds `max_residual`.
inline std::optional<PhotonicFactor> photonic_factor(const SubspaceMatrix& u,
                                                     double max_residual = 0.05) {
  const PhotonicMatrix sum = u.topLeftCorner<4, 4>() + u.bottomRightCorner<4, 4>();
  Eigen::JacobiSVD<PhotonicMatrix> svd(sum, Eigen::ComputeFullU | Eigen::ComputeFullV);
  PhotonicFactor out;
  out.w = svd.matrixU() * svd.matrixV().adjoint();
  out.residual = std::max(0.0, 1.0 - svd.singularValues().sum() / kSubspaceDim);
  if (out.residual > max_residual) return std::nullopt;
  return out;
}

}  // namespace jcprog

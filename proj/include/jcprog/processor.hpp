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
 * Register-level emulation of the multimode processor and the resource
 * arithmetic that turns hardware numbers into gate budgets.
 *
 * A register holds the qubit and M photonic modes restricted to {0, 1}
 * photons. Amplitude index = (qubit << M) | bits, with bit m the occupation
 * of mode m (0-based) and qubit 1 = |e>.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jcprog/machine.hpp"

namespace jcprog {

inline constexpr int kMaxRegisterModes = 20;

class RegisterState {
 public:
  /// Basis state |qubit; bits>.
  static RegisterState basis(int mode_count, int qubit, std::uint64_t bits) {
    check_mode_count(mode_count);
    if (qubit != 0 && qubit != 1) throw UsageError("RegisterState: qubit must be 0 or 1");
    if (bits >> mode_count) throw UsageError("RegisterState: occupation bits exceed mode count");
    ComplexVector amps = ComplexVector::Zero(dimension(mode_count));
    amps(static_cast<Eigen::Index>((static_cast<std::uint64_t>(qubit) << mode_count) | bits)) = 1.0;
    return RegisterState(mode_count, std::move(amps));
  }

  static RegisterState from_amplitudes(int mode_count, ComplexVector amplitudes) {
    check_mode_count(mode_count);
    if (amplitudes.size() != dimension(mode_count)) {
      throw UsageError("RegisterState: expected 2 * 2^M amplitudes");
    }
    if (std::abs(amplitudes.norm() - 1.0) > 1e-10) {
      throw UsageError("RegisterState: amplitudes must be normalized");
    }
    return RegisterState(mode_count, std::move(amplitudes));
  }

  static Eigen::Index dimension(int mode_count) { return Eigen::Index{2} << mode_count; }

  int mode_count() const { return mode_count_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }
  int qubit_bit() const { return mode_count_; }

  /// Reduced density matrix of the qubit, basis (|g>, |e>).
  Eigen::Matrix2cd qubit_reduced_state() const { return reduced_state(qubit_bit()); }

  /// Reduced density matrix of one mode, basis (|0>, |1>).
  Eigen::Matrix2cd mode_reduced_state(int mode) const {
    check_mode(mode);
    return reduced_state(mode);
  }

  void check_mode(int mode) const {
    if (mode < 0 || mode >= mode_count_) {
      throw UsageError("mode index " + std::to_string(mode) + " out of range for " +
                       std::to_string(mode_count_) + " modes");
    }
  }

 private:
  RegisterState(int mode_count, ComplexVector amplitudes)
      : mode_count_(mode_count), amplitudes_(std::move(amplitudes)) {}

  static void check_mode_count(int mode_count) {
    if (mode_count < 1 || mode_count > kMaxRegisterModes) {
      throw UsageError("RegisterState: mode count must be in [1, " +
                       std::to_string(kMaxRegisterModes) + "]");
    }
  }

  Eigen::Matrix2cd reduced_state(int bit) const {
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    const Eigen::Index mask = Eigen::Index{1} << bit;
    for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
      if (i & mask) continue;
      const Complex a0 = amplitudes_(i);
      const Complex a1 = amplitudes_(i | mask);
      rho(0, 0) += std::norm(a0);
      rho(1, 1) += std::norm(a1);
      rho(0, 1) += a0 * std::conj(a1);
    }
    rho(1, 0) = std::conj(rho(0, 1));
    return rho;
  }

  friend RegisterState apply_cnot(const RegisterState&, int, int);
  friend RegisterState apply_single_bit(const RegisterState&, int, const Eigen::Matrix2cd&);
  friend RegisterState swap_bits(const RegisterState&, int, int);

  int mode_count_;
  ComplexVector amplitudes_;
};

/// Flips the target mode wherever the control mode holds a photon.
inline RegisterState apply_cnot(const RegisterState& state, int control_mode, int target_mode) {
  state.check_mode(control_mode);
  state.check_mode(target_mode);
  if (control_mode == target_mode) throw UsageError("apply_cnot: control and target coincide");
  ComplexVector out = state.amplitudes_;
  const Eigen::Index c = Eigen::Index{1} << control_mode;
  const Eigen::Index t = Eigen::Index{1} << target_mode;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if ((i & c) && !(i & t)) std::swap(out(i), out(i | t));
  }
  return RegisterState(state.mode_count_, std::move(out));
}

/// Applies a 2x2 operator to one bit (a mode, or the qubit at bit M).
inline RegisterState apply_single_bit(const RegisterState& state, int bit,
                                      const Eigen::Matrix2cd& op) {
  ComplexVector out = state.amplitudes_;
  const Eigen::Index mask = Eigen::Index{1} << bit;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (i & mask) continue;
    const Complex a0 = state.amplitudes_(i);
    const Complex a1 = state.amplitudes_(i | mask);
    out(i) = op(0, 0) * a0 + op(0, 1) * a1;
    out(i | mask) = op(1, 0) * a0 + op(1, 1) * a1;
  }
  return RegisterState(state.mode_count_, std::move(out));
}

/// Exchanges the contents of two bits.
inline RegisterState swap_bits(const RegisterState& state, int bit_a, int bit_b) {
  ComplexVector out = state.amplitudes_;
  const Eigen::Index a = Eigen::Index{1} << bit_a;
  const Eigen::Index b = Eigen::Index{1} << bit_b;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if ((i & a) && !(i & b)) std::swap(out(i), out((i & ~a) | b));
  }
  return RegisterState(state.mode_count_, std::move(out));
}

/// exp(-i (alpha sigma_x + beta sigma_y + gamma sigma_z)) on the qubit,
/// basis (|g>, |e>).
inline Eigen::Matrix2cd local_rotation(double alpha, double beta, double gamma) {
  const ComplexMatrix h =
      alpha * pauli(Axis::kX) + beta * pauli(Axis::kY) + gamma * pauli(Axis::kZ);
  return matrix_exponential(h, 1.0);
}

/// S R S: swap the mode onto the qubit, rotate the qubit, swap back. The
/// qubit ends where it started and the rotation lands on the mode, with
/// |g> <-> |0> and |e> <-> |1>.
inline RegisterState local_gate(const RegisterState& state, int mode, double alpha, double beta,
                                double gamma) {
  state.check_mode(mode);
  const int q = state.qubit_bit();
  RegisterState s = swap_bits(state, q, mode);
  s = apply_single_bit(s, q, local_rotation(alpha, beta, gamma));
  return swap_bits(s, q, mode);
}

// ---------------------------------------------------------------------------
// Resources

struct ResourceParams {
  double quality_factor = 1e5;
  double rabi = 1e8;              // rad/s
  double coherence_time = 1e-4;   // s
  double band_min = 5e9;          // Hz
  double band_max = 15e9;         // Hz
  double mode_spacing = 1e9;      // Hz
  int ops_per_gate = 72;
  /// Rotation segment time relative to one entangler segment.
  double rotation_overhead = 1.0;

  void validate() const {
    if (!(quality_factor > 0.0)) throw UsageError("ResourceParams: quality factor must be positive");
    if (!(rabi > 0.0)) throw UsageError("ResourceParams: rabi must be positive");
    if (!(coherence_time >= 0.0)) throw UsageError("ResourceParams: coherence time must be >= 0");
    if (!(band_max > band_min) || !(band_min > 0.0)) {
      throw UsageError("ResourceParams: band must satisfy 0 < band_min < band_max");
    }
    if (!(mode_spacing > 0.0)) throw UsageError("ResourceParams: mode spacing must be positive");
    if (ops_per_gate < kSubspaceDim * kSubspaceDim - 1) {
      throw UsageError("ResourceParams: ops_per_gate must be >= 63");
    }
    if (!(rotation_overhead >= 0.0)) throw UsageError("ResourceParams: overhead must be >= 0");
  }
};

/// Number of modes that fit in the band at the given spacing (floored).
inline int modes_capacity(const ResourceParams& params) {
  if (!(params.band_max > params.band_min) || !(params.mode_spacing > 0.0)) {
    throw UsageError("modes_capacity: need band_max > band_min and spacing > 0");
  }
  const double ratio = (params.band_max - params.band_min) / params.mode_spacing;
  return static_cast<int>(std::floor(ratio * (1.0 + 1e-12)));
}

struct GateBudget {
  double entangler_duration = 0.0;  // s
  double gate_duration = 0.0;       // s
  long long gates_in_coherence = 0;
  /// Q / f at the top of the band; a cross-check only, it does not enter
  /// the budget.
  double q_limited_lifetime = 0.0;
  bool coherence_consistent_with_q = false;
};

inline double operation_duration(const ResourceParams& params) {
  const double entangler = 2.0 * std::numbers::pi / (std::numbers::sqrt2 * params.rabi);
  return entangler * (1.0 + params.rotation_overhead);
}

inline GateBudget gate_budget(const ResourceParams& params) {
  params.validate();
  GateBudget b;
  b.entangler_duration = 2.0 * std::numbers::pi / (std::numbers::sqrt2 * params.rabi);
  b.gate_duration = params.ops_per_gate * operation_duration(params);
  b.gates_in_coherence = static_cast<long long>(std::floor(params.coherence_time / b.gate_duration));
  b.q_limited_lifetime = params.quality_factor / params.band_max;
  b.coherence_consistent_with_q = params.coherence_time <= b.q_limited_lifetime;
  return b;
}

// ---------------------------------------------------------------------------
// Circuits

struct CircuitGate {
  enum class Kind { kCnot, kLocal };
  Kind kind = Kind::kCnot;
  int mode_a = 0;  // control for CNOT, target mode for LOCAL
  int mode_b = 0;  // target for CNOT
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

using Circuit = std::vector<CircuitGate>;

/// Parses `CNOT c t` / `LOCAL m alpha beta gamma` lines; `#` starts a
/// comment.
inline Circuit parse_circuit(std::istream& in) {
  Circuit circuit;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string op;
    if (!(tokens >> op)) continue;
    CircuitGate g;
    bool ok = false;
    if (op == "CNOT") {
      g.kind = CircuitGate::Kind::kCnot;
      ok = static_cast<bool>(tokens >> g.mode_a >> g.mode_b);
    } else if (op == "LOCAL") {
      g.kind = CircuitGate::Kind::kLocal;
      ok = static_cast<bool>(tokens >> g.mode_a >> g.alpha >> g.beta >> g.gamma);
    } else {
      throw UsageError("circuit line " + std::to_string(line_no) + ": unknown gate '" + op + "'");
    }
    std::string extra;
    if (!ok || (tokens >> extra)) {
      throw UsageError("circuit line " + std::to_string(line_no) + ": malformed " + op);
    }
    circuit.push_back(g);
  }
  return circuit;
}

struct CircuitCost {
  long long machine_ops = 0;
  double duration = 0.0;  // s
  bool feasible = true;
};

/// Every CNOT costs one gate sequence; every LOCAL costs two swap sequences
/// plus one qubit rotation.
inline CircuitCost compile_circuit(const Circuit& circuit, const ResourceParams& params,
                                   int mode_count) {
  params.validate();
  CircuitCost cost;
  for (std::size_t k = 0; k < circuit.size(); ++k) {
    const CircuitGate& g = circuit[k];
    auto check = [&](int m) {
      if (m < 0 || m >= mode_count) {
        throw UsageError("circuit gate " + std::to_string(k) + ": mode " + std::to_string(m) +
                         " out of range for " + std::to_string(mode_count) + " modes");
      }
    };
    check(g.mode_a);
    if (g.kind == CircuitGate::Kind::kCnot) {
      check(g.mode_b);
      if (g.mode_a == g.mode_b) {
        throw UsageError("circuit gate " + std::to_string(k) + ": CNOT control equals target");
      }
      cost.machine_ops += params.ops_per_gate;
    } else {
      cost.machine_ops += 2LL * params.ops_per_gate + 1;
    }
  }
  cost.duration = static_cast<double>(cost.machine_ops) * operation_duration(params);
  cost.feasible = cost.duration <= params.coherence_time;
  return cost;
}

inline CircuitCost compile_circuit(const Circuit& circuit, const ResourceParams& params) {
  return compile_circuit(circuit, params, modes_capacity(params));
}

/// Runs a circuit on a register with ideal gate matrices.
inline RegisterState apply_circuit(RegisterState state, const Circuit& circuit) {
  for (const CircuitGate& g : circuit) {
    state = g.kind == CircuitGate::Kind::kCnot
                ? apply_cnot(state, g.mode_a, g.mode_b)
                : local_gate(state, g.mode_a, g.alpha, g.beta, g.gamma);
  }
  return state;
}

}  // namespace jcprog

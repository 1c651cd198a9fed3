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
 * Gate synthesis: finds rotation angles that make the alternating
 * entangler/rotation product equal a target 8x8 unitary up to global phase,
 * and certifies controllability of the subspace through the rank of the
 * Lie algebra spanned by the machine's generators.
 */

#pragma once

#include <cstdint>
#include <future>
#include <numbers>
#include <optional>
#include <vector>

#include "jcprog/lbfgs.hpp"
#include "jcprog/random.hpp"
#include "jcprog/sequence.hpp"

namespace jcprog {

/// su(8) has dimension N^2 - 1; fewer parameters cannot reach a generic
/// target.
inline constexpr int kParameterBound = kSubspaceDim * kSubspaceDim - 1;

struct OptimizationConfig {
  int step_count = 72;
  Pattern pattern = canonical_pattern();
  int restarts = 32;
  int max_iterations = 3000;
  /// Convergence threshold on the infidelity 1 - F.
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  /// Restarts evaluated concurrently. Does not affect the result.
  int threads = 1;

  bool below_parameter_bound() const { return step_count < kParameterBound; }

  void validate() const {
    if (step_count <= 0) throw UsageError("OptimizationConfig: step_count must be positive");
    if (pattern.empty()) throw UsageError("OptimizationConfig: empty pattern");
    if (restarts <= 0) throw UsageError("OptimizationConfig: restarts must be positive");
    if (max_iterations < 0) throw UsageError("OptimizationConfig: negative max_iterations");
    if (!(tolerance > 0.0)) throw UsageError("OptimizationConfig: tolerance must be positive");
    if (threads <= 0) throw UsageError("OptimizationConfig: threads must be positive");
  }
};

struct SynthesisResult {
  std::vector<double> sigmas;
  Pattern pattern;
  /// 1 - |trace(V^dagger U)| / 8 of the returned sigmas, re-evaluated.
  double infidelity = 1.0;
  bool converged = false;
  int restarts_used = 0;
  int iterations = 0;
  double gradient_norm = 0.0;
  /// Infidelity after each accepted iteration of the winning restart.
  std::vector<double> trace;

  ControlSequence sequence(std::string name = "synthesized") const {
    return make_sequence(pattern, sigmas, std::move(name));
  }
};

struct FidelityEvaluation {
  double fidelity = 0.0;
  Eigen::VectorXd gradient;
};

namespace detail {

/// Sparse form of the primitive blocks used by the gradient kernel. Each
/// restricted Pauli matrix is a signed permutation, and each entangler
/// block is identity plus 2x2 rotations on its doublets.
struct SparseKernel {
  struct Entry {
    int row;
    int col;
    Complex value;
  };
  struct SignedPermutation {
    std::array<int, kSubspaceDim> col{};
    std::array<Complex, kSubspaceDim> value{};
  };

  std::array<std::vector<Entry>, 2> entangler;  // indexed by mode - 1
  std::array<SignedPermutation, 3> pauli;       // indexed by Axis

  static const SparseKernel& instance() {
    static const SparseKernel kernel = build();
    return kernel;
  }

  // out = E x
  void apply_entangler_left(Mode mode, const SubspaceMatrix& x, SubspaceMatrix& out) const {
    out.setZero();
    for (const Entry& e : entangler[static_cast<int>(mode) - 1]) {
      out.row(e.row) += e.value * x.row(e.col);
    }
  }
  // out = x E
  void apply_entangler_right(Mode mode, const SubspaceMatrix& x, SubspaceMatrix& out) const {
    out.setZero();
    for (const Entry& e : entangler[static_cast<int>(mode) - 1]) {
      out.col(e.col) += x.col(e.row) * e.value;
    }
  }
  // out = (c I + d P) x
  void apply_pauli_combo_left(Axis axis, Complex c, Complex d, const SubspaceMatrix& x,
                              SubspaceMatrix& out) const {
    const SignedPermutation& p = pauli[static_cast<int>(axis)];
    for (int r = 0; r < kSubspaceDim; ++r) {
      out.row(r) = c * x.row(r) + (d * p.value[r]) * x.row(p.col[r]);
    }
  }
  // out = x (c I + d P)
  void apply_pauli_combo_right(Axis axis, Complex c, Complex d, const SubspaceMatrix& x,
                               SubspaceMatrix& out) const {
    const SignedPermutation& p = pauli[static_cast<int>(axis)];
    out = c * x;
    for (int r = 0; r < kSubspaceDim; ++r) {
      out.col(p.col[r]) += (d * p.value[r]) * x.col(r);
    }
  }

 private:
  static SparseKernel build() {
    const PrimitiveBlocks& blocks = PrimitiveBlocks::instance();
    SparseKernel k;
    for (Mode mode : {Mode::kFirst, Mode::kSecond}) {
      const SubspaceMatrix& e = blocks.entangler(mode);
      for (int c = 0; c < kSubspaceDim; ++c) {
        for (int r = 0; r < kSubspaceDim; ++r) {
          if (std::abs(e(r, c)) > 1e-15) {
            k.entangler[static_cast<int>(mode) - 1].push_back({r, c, e(r, c)});
          }
        }
      }
    }
    for (int a = 0; a < 3; ++a) {
      for (int r = 0; r < kSubspaceDim; ++r) {
        Eigen::Index c = 0;
        blocks.pauli[a].row(r).cwiseAbs().maxCoeff(&c);
        k.pauli[a].col[r] = static_cast<int>(c);
        k.pauli[a].value[r] = blocks.pauli[a](r, c);
      }
    }
    return k;
  }
};

}  // namespace detail

/// F = |trace(V^dagger U(sigma))| / 8 and its analytic gradient.
///
/// With G_k = R_k E_k and U = G_M ... G_1, the derivative of trace(W U) for
/// W = V^dagger is trace(W G_M ... G_{k+1} (-i P_k) G_k ... G_1), where P_k
/// is the restricted Pauli matrix of step k. Prefix products are cached on
/// the way forward and the suffix is accumulated on the way back.
inline FidelityEvaluation fidelity_and_gradient(std::span<const double> sigmas,
                                                const Pattern& pattern,
                                                const SubspaceMatrix& target) {
  const detail::SparseKernel& kernel = detail::SparseKernel::instance();
  const std::size_t m = sigmas.size();
  std::vector<SubspaceMatrix> prefix(m + 1);
  prefix[0].setIdentity();
  SubspaceMatrix tmp;
  for (std::size_t k = 0; k < m; ++k) {
    const PatternSlot& slot = pattern[k % pattern.size()];
    kernel.apply_entangler_left(slot.entangler, prefix[k], tmp);
    kernel.apply_pauli_combo_left(slot.axis, std::cos(sigmas[k]), -kI * std::sin(sigmas[k]), tmp,
                                  prefix[k + 1]);
  }
  const SubspaceMatrix w = target.adjoint();
  const Complex z = w.cwiseProduct(prefix[m].transpose()).sum();
  const double abs_z = std::abs(z);

  FidelityEvaluation out;
  out.fidelity = abs_z / kSubspaceDim;
  out.gradient = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  if (abs_z == 0.0) return out;

  SubspaceMatrix suffix = w;  // W G_M ... G_{k+1}
  SubspaceMatrix tmp2;
  for (std::size_t k = m; k-- > 0;) {
    const PatternSlot& slot = pattern[k % pattern.size()];
    // trace(suffix (-i P) prefix[k+1])
    kernel.apply_pauli_combo_right(slot.axis, 0.0, -kI, suffix, tmp);
    const Complex dz = tmp.cwiseProduct(prefix[k + 1].transpose()).sum();
    out.gradient(static_cast<Eigen::Index>(k)) =
        (std::conj(z) * dz).real() / (abs_z * kSubspaceDim);
    kernel.apply_pauli_combo_right(slot.axis, std::cos(sigmas[k]), -kI * std::sin(sigmas[k]),
                                   suffix, tmp);
    kernel.apply_entangler_right(slot.entangler, tmp, tmp2);
    suffix = tmp2;
  }
  return out;
}

/// Gradient of F with respect to the sigmas.
inline Eigen::VectorXd fidelity_gradient(std::span<const double> sigmas, const GateTarget& target,
                                         const Pattern& pattern = canonical_pattern()) {
  return fidelity_and_gradient(sigmas, pattern, target.matrix).gradient;
}

namespace detail {

struct RestartOutcome {
  LbfgsResult run;
  int restart = 0;
};

inline RestartOutcome run_restart(const SubspaceMatrix& target, const OptimizationConfig& config,
                                  int restart) {
  auto rng = make_stream(config.seed, static_cast<std::uint64_t>(restart));
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  Eigen::VectorXd x0(config.step_count);
  for (int k = 0; k < config.step_count; ++k) x0(k) = angle(rng);

  const Objective infidelity = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    FidelityEvaluation e = fidelity_and_gradient(
        std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), config.pattern,
        target);
    grad = -e.gradient;
    return 1.0 - e.fidelity;
  };
  LbfgsOptions options;
  options.max_iterations = config.max_iterations;
  options.target_value = config.tolerance;
  return {minimize_lbfgs(infidelity, std::move(x0), options), restart};
}

}  // namespace detail

/// Multi-start fidelity maximization.
///
/// Restart r starts from sigmas drawn uniformly from [-pi, pi] with the
/// random stream (seed, r). The result is the lowest-index restart that
/// converges, or the lowest infidelity over all restarts when none does, so
/// it does not depend on `threads`.
inline SynthesisResult synthesize(const GateTarget& target, const OptimizationConfig& config) {
  config.validate();
  if (!check_unitary(target.matrix, tolerance::kUnitarity).pass) {
    throw UsageError("synthesize: target '" + target.name + "' is not unitary");
  }

  std::optional<detail::RestartOutcome> best;
  for (int begin = 0; begin < config.restarts; begin += config.threads) {
    const int end = std::min(config.restarts, begin + config.threads);
    std::vector<detail::RestartOutcome> batch;
    if (end - begin == 1) {
      batch.push_back(detail::run_restart(target.matrix, config, begin));
    } else {
      std::vector<std::future<detail::RestartOutcome>> futures;
      for (int r = begin; r < end; ++r) {
        futures.push_back(std::async(std::launch::async, detail::run_restart,
                                     std::cref(target.matrix), std::cref(config), r));
      }
      for (auto& f : futures) batch.push_back(f.get());
    }
    bool done = false;
    for (auto& outcome : batch) {
      if (outcome.run.reached_target) {
        best = std::move(outcome);
        done = true;
        break;
      }
      if (!best || outcome.run.value < best->run.value) best = std::move(outcome);
    }
    if (done) break;
  }

  SynthesisResult result;
  result.sigmas.assign(best->run.x.data(), best->run.x.data() + best->run.x.size());
  result.pattern = config.pattern;
  result.restarts_used = best->run.reached_target ? best->restart + 1 : config.restarts;
  result.iterations = best->run.iterations;
  result.gradient_norm = best->run.gradient_norm;
  result.trace = std::move(best->run.trace);
  result.infidelity = 1.0 - trace_fidelity(evaluate(result.sequence()), target.matrix);
  result.converged = result.infidelity < config.tolerance;
  return result;
}

// ---------------------------------------------------------------------------
// Controllability

/// Anti-hermitian restricted generators available to `pattern`: -i times
/// the coupling of each addressed mode and -i times each used Pauli matrix.
inline std::vector<SubspaceMatrix> controllability_generators(const Pattern& pattern) {
  const PrimitiveBlocks& blocks = PrimitiveBlocks::instance();
  bool has_a = false;
  bool has_b = false;
  std::array<bool, 3> has_axis{};
  for (const PatternSlot& slot : pattern) {
    (slot.entangler == Mode::kFirst ? has_a : has_b) = true;
    has_axis[static_cast<int>(slot.axis)] = true;
  }
  std::vector<SubspaceMatrix> out;
  if (has_a) out.push_back(-kI * blocks.coupling_a);
  if (has_b) out.push_back(-kI * blocks.coupling_b);
  for (int a = 0; a < 3; ++a) {
    if (has_axis[a]) out.push_back(-kI * blocks.pauli[a]);
  }
  return out;
}

/// Dimension of the real Lie algebra generated by `generators`.
///
/// Breadth-first commutator expansion: every element of the running basis
/// is bracketed with every earlier one, and each bracket is
/// Gram-Schmidt-orthogonalized (twice) against the basis under the real
/// inner product Re trace(X^dagger Y). A direction is kept when its
/// normalized residual exceeds `tol`. The loop ends when a full sweep adds
/// nothing.
inline int controllability_rank(std::span<const SubspaceMatrix> generators, double tol = 1e-9) {
  std::vector<SubspaceMatrix> basis;
  auto inner = [](const SubspaceMatrix& a, const SubspaceMatrix& b) {
    return (a.adjoint() * b).trace().real();
  };
  auto try_add = [&](SubspaceMatrix v) {
    const double norm0 = std::sqrt(inner(v, v));
    if (norm0 < 1e-12) return;
    v /= norm0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const SubspaceMatrix& b : basis) v -= inner(b, v) * b;
    }
    const double residual = std::sqrt(inner(v, v));
    if (residual > tol) basis.push_back(v / residual);
  };
  for (const SubspaceMatrix& g : generators) try_add(g);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      try_add(basis[i] * basis[j] - basis[j] * basis[i]);
    }
  }
  return static_cast<int>(basis.size());
}

inline int controllability_rank(const Pattern& pattern, double tol = 1e-9) {
  const auto gens = controllability_generators(pattern);
  return controllability_rank(gens, tol);
}

// ---------------------------------------------------------------------------
// Reachability

/// Basis of the complex bilinear forms J with X^T J + J X = 0 for every
/// generator X, i.e. forms preserved by every product of the generated
/// one-parameter groups. An empty result means no such obstruction exists.
inline std::vector<SubspaceMatrix> invariant_bilinear_forms(
    std::span<const SubspaceMatrix> generators, double tol = 1e-9) {
  constexpr int n = kSubspaceDim;
  const Eigen::Index rows = static_cast<Eigen::Index>(generators.size()) * n * n;
  ComplexMatrix system = ComplexMatrix::Zero(std::max<Eigen::Index>(rows, 1), n * n);
  // Column-major vec: vec(X^T J) = (I (x) X^T) vec(J), vec(J X) = (X^T (x) I) vec(J).
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const ComplexMatrix xt = generators[g].transpose();
    system.middleRows(static_cast<Eigen::Index>(g) * n * n, n * n) =
        tensor_product({id, xt}) + tensor_product({xt, id});
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(system, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  std::vector<SubspaceMatrix> forms;
  for (Eigen::Index k = 0; k < n * n; ++k) {
    const double s = k < sv.size() ? sv(k) : 0.0;
    if (s < tol) {
      SubspaceMatrix j = Eigen::Map<const SubspaceMatrix>(svd.matrixV().col(k).data());
      j /= j.cwiseAbs().maxCoeff();
      forms.push_back(j);
    }
  }
  return forms;
}

inline std::vector<SubspaceMatrix> invariant_bilinear_forms(const Pattern& pattern) {
  const auto gens = controllability_generators(pattern);
  return invariant_bilinear_forms(gens);
}

/// How far `u` is from preserving the form `j` up to a global phase:
/// max |u^T j u - c j| with the best complex c.
inline double form_defect(const SubspaceMatrix& u, const SubspaceMatrix& j) {
  const SubspaceMatrix image = u.transpose() * j * u;
  const Complex c = j.conjugate().cwiseProduct(image).sum() / j.squaredNorm();
  return (image - c * j).cwiseAbs().maxCoeff();
}

/// Largest form defect over the invariant forms of `pattern`. A target with
/// a defect well above round-off cannot be produced by any sequence on that
/// pattern, whatever its length.
inline double reachability_defect(const SubspaceMatrix& u,
                                  const Pattern& pattern = canonical_pattern()) {
  double worst = 0.0;
  for (const SubspaceMatrix& j : invariant_bilinear_forms(pattern)) {
    worst = std::max(worst, form_defect(u, j));
  }
  return worst;
}

}  // namespace jcprog

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
 * Truncated bosonic Fock-space operators and the dense complex linear
 * algebra shared by the rest of the library.
 *
 * All matrices are dense. The largest space handled in practice is a qubit
 * times two modes truncated at a handful of photons, i.e. well under 100
 * basis states.
 */

#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "jcprog/errors.hpp"

namespace jcprog {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Ladder operators of one oscillator truncated at `n_max` photons.
struct ModeOperators {
  ComplexMatrix annihilation;
  ComplexMatrix creation;
  ComplexMatrix number;
};

/// Builds a, a^dagger and a^dagger a on levels 0..n_max, with
/// <n-1|a|n> = sqrt(n).
inline ModeOperators build_mode_operators(int n_max) {
  if (n_max < 0) throw UsageError("build_mode_operators: n_max must be >= 0");
  const int dim = n_max + 1;
  ModeOperators ops;
  ops.annihilation = ComplexMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    ops.annihilation(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  ops.creation = ops.annihilation.adjoint();
  // Exact integers; a^dagger a would round sqrt(n)^2.
  ops.number = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) ops.number(n, n) = static_cast<double>(n);
  return ops;
}

/// Kronecker product of `factors` in the given order; the first factor is
/// the most significant index.
inline ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) throw UsageError("tensor_product: empty factor list");
  ComplexMatrix result = factors.front();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const ComplexMatrix& rhs = factors[f];
    ComplexMatrix next(result.rows() * rhs.rows(), result.cols() * rhs.cols());
    for (Eigen::Index i = 0; i < result.rows(); ++i) {
      for (Eigen::Index j = 0; j < result.cols(); ++j) {
        next.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) =
            result(i, j) * rhs;
      }
    }
    result = std::move(next);
  }
  return result;
}

inline ComplexMatrix tensor_product(std::initializer_list<ComplexMatrix> factors) {
  return tensor_product(std::span<const ComplexMatrix>(factors.begin(), factors.size()));
}

/// Largest absolute entry.
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = tolerance::kHermiticity) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) < tol;
}

/// exp(-i * scale * generator) for a hermitian generator, evaluated through
/// the eigendecomposition so the result is unitary to working precision.
inline ComplexMatrix matrix_exponential(const ComplexMatrix& generator, double scale) {
  if (generator.rows() != generator.cols()) {
    throw UsageError("matrix_exponential: generator must be square");
  }
  if (!is_hermitian(generator)) {
    throw ContractViolation("matrix_exponential: generator is not hermitian");
  }
  const ComplexMatrix symmetric = 0.5 * (generator + generator.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(symmetric);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  ComplexVector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    phases(k) = std::exp(-kI * scale * lambda(k));
  }
  const ComplexMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

struct UnitarityReport {
  double max_deviation = 0.0;
  bool pass = false;
};

/// max_deviation = max |(U^dagger U - I)_ij|.
inline UnitarityReport check_unitary(const ComplexMatrix& u,
                                     double tol = tolerance::kUnitarity) {
  if (u.rows() != u.cols()) throw UsageError("check_unitary: matrix must be square");
  UnitarityReport report;
  report.max_deviation =
      max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
  report.pass = report.max_deviation < tol;
  return report;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

}  // namespace jcprog

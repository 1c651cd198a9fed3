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

#pragma once

#include <cstdint>
#include <random>

#include <gtest/gtest.h>

#include "jcprog/fock.hpp"
#include "jcprog/machine.hpp"
#include "jcprog/random.hpp"
#include "jcprog/sequence.hpp"

namespace jcprog::testing {

inline constexpr double kAlgebraic = tolerance::kAlgebraic;

/// Random sequence of `length` steps with independent entangler/axis
/// choices and sigma in [-pi, pi].
template <class Rng>
ControlSequence random_sequence(int length, Rng& rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> axis(0, 2);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  ControlSequence seq;
  seq.name = "random";
  for (int k = 0; k < length; ++k) {
    seq.steps.push_back({coin(rng) == 0 ? Mode::kFirst : Mode::kSecond,
                         static_cast<Axis>(axis(rng)), angle(rng)});
  }
  return seq;
}

template <class Rng>
SubspaceMatrix random_subspace_unitary(Rng& rng) {
  return random_unitary(kSubspaceDim, rng);
}

/// Unit vector along basis state |q n2 n1> of the joint space.
inline ComplexVector joint_ket(const JointSpace& space, int q, int n2, int n1) {
  ComplexVector v = ComplexVector::Zero(space.dim());
  v(space.index(q, n2, n1)) = 1.0;
  return v;
}

}  // namespace jcprog::testing

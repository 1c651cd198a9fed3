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
 * Limited-memory BFGS minimizer with a backtracking Armijo line search.
 */

#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace jcprog {

struct LbfgsOptions {
  int max_iterations = 2000;
  int history = 10;
  /// Stop as soon as the objective drops below this value.
  double target_value = -std::numeric_limits<double>::infinity();
  double gradient_tolerance = 1e-14;
  double armijo = 1e-4;
  int max_backtracks = 50;
  /// Stop when the objective improved by less than `stall_tolerance` over
  /// the last `stall_window` iterations.
  int stall_window = 200;
  double stall_tolerance = 1e-12;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool reached_target = false;
  /// Objective after each accepted iteration, starting with the initial
  /// point. Non-increasing.
  std::vector<double> trace;
};

/// `objective(x, grad)` returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

inline LbfgsResult minimize_lbfgs(const Objective& objective, Eigen::VectorXd x,
                                  const LbfgsOptions& options = {}) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd g(n);
  double f = objective(x, g);

  std::deque<Eigen::VectorXd> s_hist;
  std::deque<Eigen::VectorXd> y_hist;
  std::deque<double> rho_hist;

  LbfgsResult out;
  out.trace.push_back(f);
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (f < options.target_value) {
      out.reached_target = true;
      break;
    }
    if (g.norm() < options.gradient_tolerance) break;

    // Two-loop recursion.
    Eigen::VectorXd d = -g;
    const std::size_t m = s_hist.size();
    std::vector<double> alpha(m);
    for (std::size_t i = m; i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(d);
      d -= alpha[i] * y_hist[i];
    }
    if (m > 0) d *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < m; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(d);
      d += (alpha[i] - beta) * s_hist[i];
    }
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g;
      slope = -g.squaredNorm();
    }

    double step = (m == 0) ? std::min(1.0, 1.0 / g.norm()) : 1.0;
    Eigen::VectorXd x_new(n);
    Eigen::VectorXd g_new(n);
    double f_new = f;
    bool accepted = false;
    for (int bt = 0; bt < options.max_backtracks; ++bt) {
      x_new = x + step * d;
      f_new = objective(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + options.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm() && sy > 0.0) {
      if (static_cast<int>(s_hist.size()) == options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    out.trace.push_back(f);
    const std::size_t w = static_cast<std::size_t>(options.stall_window);
    if (options.stall_window > 0 && out.trace.size() > w &&
        out.trace[out.trace.size() - 1 - w] - f < options.stall_tolerance) {
      ++it;
      break;
    }
  }
  if (f < options.target_value) out.reached_target = true;
  out.x = std::move(x);
  out.value = f;
  out.gradient_norm = g.norm();
  out.iterations = it;
  return out;
}

}  // namespace jcprog

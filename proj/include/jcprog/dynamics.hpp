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
 * Time-domain check of the ideal subspace model: lowers a control sequence
 * to piecewise-constant controls, propagates the full two-mode Hamiltonian
 *
 *   H = Delta (n1 - n2) + delta sigma_z / 2 + X sigma_x + Y sigma_y
 *       + (Omega1 a^dagger + Omega2 b^dagger) sigma- + h.c.
 *
 * and compares the result against the ideal product of primitive blocks
 * dressed with the frame phases each segment accumulates.
 *
 * With sigma_z = +1 on |g>, |e,n1,n2> and |g,n1+1,n2> are degenerate at
 * delta = -Delta, so that detuning addresses mode 1; delta = +Delta
 * addresses mode 2.
 */

#pragma once

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "jcprog/sequence.hpp"

namespace jcprog {

struct PulseSegment {
  double duration = 0.0;  // s
  double delta = 0.0;     // rad/s, qubit detuning from the mode midpoint
  double x_drive = 0.0;   // rad/s
  double y_drive = 0.0;   // rad/s
  friend bool operator==(const PulseSegment&, const PulseSegment&) = default;
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;
  MachineConfig config;

  double total_duration() const {
    double t = 0.0;
    for (const PulseSegment& s : segments) t += s.duration;
    return t;
  }
};

enum class SegmentRole { kResonantFirst, kResonantSecond, kManipulation };

inline double resonant_detuning(Mode mode, const MachineConfig& config) {
  return mode == Mode::kFirst ? -config.half_detuning : config.half_detuning;
}

/// Trapping duration tau with tau Omega sqrt(2) = 2 pi.
inline double entangler_duration(Mode mode, const MachineConfig& config) {
  return 2.0 * std::numbers::pi / (std::numbers::sqrt2 * config.rabi(mode));
}

/// Resonant segments are recognized by delta == -+Delta exactly.
inline SegmentRole role_of(const PulseSegment& seg, const MachineConfig& config) {
  if (seg.delta == resonant_detuning(Mode::kFirst, config)) return SegmentRole::kResonantFirst;
  if (seg.delta == resonant_detuning(Mode::kSecond, config)) return SegmentRole::kResonantSecond;
  return SegmentRole::kManipulation;
}

/// How qubit rotations are lowered to drive segments.
struct RotationPolicy {
  /// Cap on |X| and |Y| as a fraction of Delta.
  double drive_cap_fraction = 0.1;
  /// Cap on the z-rotation detuning excursion |delta| as a fraction of Delta.
  double detuning_cap_fraction = 0.1;
  /// When positive, every rotation segment lasts exactly this many periods
  /// 2 pi / Delta and compilation fails if a cap would be exceeded. When
  /// zero, each segment gets the fewest periods that respect the caps.
  int fixed_periods = 0;
};

inline PulseSchedule compile_schedule(const ControlSequence& seq, const MachineConfig& config,
                                      const RotationPolicy& policy = {}) {
  config.validate();
  const double period = 2.0 * std::numbers::pi / config.half_detuning;
  const double drive_cap = policy.drive_cap_fraction * config.half_detuning;
  const double detuning_cap = policy.detuning_cap_fraction * config.half_detuning;

  PulseSchedule schedule;
  schedule.config = config;
  std::vector<std::string> offending;
  const std::vector<Step> steps = seq.effective_steps();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Step& step = steps[k];
    schedule.segments.push_back(
        {entangler_duration(step.entangler, config), resonant_detuning(step.entangler, config),
         0.0, 0.0});

    // Required area per unit cap: |sigma| for x/y, 2|sigma| for z.
    const bool is_z = step.axis == Axis::kZ;
    const double area = is_z ? 2.0 * std::abs(step.sigma) : std::abs(step.sigma);
    const double cap = is_z ? detuning_cap : drive_cap;
    double periods = 0.0;
    if (policy.fixed_periods > 0) {
      periods = policy.fixed_periods;
    } else if (area > 0.0) {
      periods = std::ceil(area / (cap * period) * (1.0 - 1e-12));
    }
    const double duration = periods * period;
    PulseSegment seg{duration, 0.0, 0.0, 0.0};
    if (area > 0.0) {
      const double amplitude = (is_z ? 2.0 * step.sigma : step.sigma) / duration;
      if (std::abs(amplitude) > cap * (1.0 + 1e-12)) {
        offending.push_back("step " + std::to_string(k) + " (" + to_string(step.axis) +
                            ", sigma " + std::to_string(step.sigma) + ") needs " +
                            std::to_string(std::abs(amplitude)) + " rad/s > cap " +
                            std::to_string(cap));
        continue;
      }
      switch (step.axis) {
        case Axis::kX: seg.x_drive = amplitude; break;
        case Axis::kY: seg.y_drive = amplitude; break;
        case Axis::kZ: seg.delta = amplitude; break;
      }
    }
    schedule.segments.push_back(seg);
  }
  if (!offending.empty()) {
    std::string msg = "compile_schedule: rotation policy exceeds drive cap:";
    for (const std::string& s : offending) msg += "\n  " + s;
    throw CompilationError(msg);
  }
  return schedule;
}

struct CouplingSelection {
  bool first = true;
  bool second = true;
};

/// Piecewise-constant Hamiltonian of one segment in the joint space.
inline ComplexMatrix segment_hamiltonian(const PulseSegment& seg, const MachineConfig& config,
                                         int n_max, CouplingSelection couplings = {}) {
  const JointSpace space(n_max);
  const ModeOperators ops = build_mode_operators(n_max);
  ComplexMatrix h = config.half_detuning * (space.embed_mode(Mode::kFirst, ops.number) -
                                            space.embed_mode(Mode::kSecond, ops.number));
  h += space.embed_qubit(0.5 * seg.delta * pauli(Axis::kZ) + seg.x_drive * pauli(Axis::kX) +
                         seg.y_drive * pauli(Axis::kY));
  if (couplings.first) h += config.rabi_1 * coupling_generator(Mode::kFirst, n_max);
  if (couplings.second) h += config.rabi_2 * coupling_generator(Mode::kSecond, n_max);
  return h;
}

struct PropagateOptions {
  /// Keep the coupling to modes that are off resonance during a segment.
  /// With this off, resonant segments couple only the addressed mode and
  /// rotation segments couple none.
  bool off_resonant_coupling = true;
  /// Apply exp(+i H tau) in reverse segment order, i.e. the exact inverse.
  bool backward = false;
};

inline ComplexMatrix propagate(const PulseSchedule& schedule, int n_max,
                               const PropagateOptions& options = {}) {
  const JointSpace space(n_max);
  ComplexMatrix u = space.identity();
  const std::size_t n = schedule.segments.size();
  for (std::size_t i = 0; i < n; ++i) {
    const PulseSegment& seg = schedule.segments[options.backward ? n - 1 - i : i];
    if (seg.duration == 0.0) continue;
    CouplingSelection couplings;
    if (!options.off_resonant_coupling) {
      const SegmentRole role = role_of(seg, schedule.config);
      couplings.first = role == SegmentRole::kResonantFirst;
      couplings.second = role == SegmentRole::kResonantSecond;
    }
    const ComplexMatrix h = segment_hamiltonian(seg, schedule.config, n_max, couplings);
    u = matrix_exponential(h, options.backward ? -seg.duration : seg.duration) * u;
  }
  return u;
}

inline ComplexMatrix propagate(const PulseSchedule& schedule, const PropagateOptions& options = {}) {
  return propagate(schedule, schedule.config.n_max, options);
}

/// Ideal subspace evolution of a schedule: each resonant segment is the
/// entangler block times its frame phase exp(-i tau (Delta (n1 - n2) +
/// delta sigma_z / 2)); each rotation segment is the free phase
/// exp(-i tau Delta (n1 - n2)) times the qubit rotation it drives.
inline SubspaceMatrix ideal_model(const PulseSchedule& schedule) {
  const int n_max = kTrappingLevel;
  const JointSpace space(n_max);
  const MachineConfig& config = schedule.config;
  SubspaceMatrix u = SubspaceMatrix::Identity();
  for (const PulseSegment& seg : schedule.segments) {
    const SubspaceMatrix phase =
        restrict_to_subspace(free_phase(seg.duration * config.half_detuning, n_max), n_max).block;
    SubspaceMatrix step;
    switch (role_of(seg, config)) {
      case SegmentRole::kResonantFirst:
      case SegmentRole::kResonantSecond: {
        const Mode mode = role_of(seg, config) == SegmentRole::kResonantFirst ? Mode::kFirst
                                                                                : Mode::kSecond;
        const SubspaceMatrix frame =
            phase * restrict_to_subspace(
                        qubit_rotation(Axis::kZ, 0.5 * seg.delta * seg.duration, n_max), n_max)
                        .block;
        step = frame * PrimitiveBlocks::instance().entangler(mode);
        break;
      }
      case SegmentRole::kManipulation: {
        const ComplexMatrix qubit_h = 0.5 * seg.delta * pauli(Axis::kZ) +
                                      seg.x_drive * pauli(Axis::kX) +
                                      seg.y_drive * pauli(Axis::kY);
        const SubspaceMatrix rotation =
            restrict_to_subspace(space.embed_qubit(matrix_exponential(qubit_h, seg.duration)),
                                 n_max)
                .block;
        step = phase * rotation;
        break;
      }
    }
    u = (step * u).eval();
  }
  return u;
}

struct ValidationReport {
  double leakage_out_of_subspace = 0.0;
  double strict_infidelity = 0.0;
  double phase_robust_infidelity = 0.0;
  double off_resonance_ratio = 0.0;
  int segment_count = 0;
  double total_duration = 0.0;
  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Compares a propagated subspace block against the ideal model.
/// Strict infidelity is 1 - |trace(ideal^dagger U)| / 8; the phase-robust
/// variant forgives an independent phase per basis column,
/// 1 - (1/8) sum_j |<ideal_j|U|j>|.
inline ValidationReport compare_to_ideal(const ComplexMatrix& u_full, const SubspaceMatrix& ideal,
                                         int n_max) {
  const RestrictedBlock r = restrict_to_subspace(u_full, n_max);
  ValidationReport report;
  report.leakage_out_of_subspace = std::clamp(r.leakage, 0.0, 1.0);
  report.strict_infidelity = std::clamp(1.0 - trace_fidelity(r.block, ideal), 0.0, 1.0);
  double aligned = 0.0;
  for (int j = 0; j < kSubspaceDim; ++j) aligned += std::abs(ideal.col(j).dot(r.block.col(j)));
  report.phase_robust_infidelity = std::clamp(1.0 - aligned / kSubspaceDim, 0.0, 1.0);
  return report;
}

inline ValidationReport validate(const ControlSequence& seq, const MachineConfig& config,
                                 int n_max, const RotationPolicy& policy = {}) {
  const PulseSchedule schedule = compile_schedule(seq, config, policy);
  ValidationReport report = compare_to_ideal(propagate(schedule, n_max), ideal_model(schedule),
                                             n_max);
  report.off_resonance_ratio = config.off_resonance_ratio();
  report.segment_count = static_cast<int>(schedule.segments.size());
  report.total_duration = schedule.total_duration();
  return report;
}

inline ValidationReport validate(const ControlSequence& seq, const MachineConfig& config,
                                 const RotationPolicy& policy = {}) {
  return validate(seq, config, config.n_max, policy);
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kScheduleCsvHeader = "duration_s,delta_rad_s,x_rad_s,y_rad_s";

inline void write_schedule_csv(const PulseSchedule& schedule, std::ostream& out) {
  out << kScheduleCsvHeader << '\n';
  out << std::setprecision(17);
  for (const PulseSegment& s : schedule.segments) {
    out << s.duration << ',' << s.delta << ',' << s.x_drive << ',' << s.y_drive << '\n';
  }
}

inline PulseSchedule read_schedule_csv(std::istream& in, const MachineConfig& config) {
  std::string line;
  if (!std::getline(in, line)) throw UsageError("schedule csv: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kScheduleCsvHeader) {
    throw UsageError("schedule csv: expected header '" + std::string(kScheduleCsvHeader) + "'");
  }
  PulseSchedule schedule;
  schedule.config = config;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, 4> v{};
    std::stringstream row(line);
    std::string cell;
    int col = 0;
    while (std::getline(row, cell, ',')) {
      if (col >= 4) throw UsageError("schedule csv: too many columns on line " + std::to_string(line_no));
      std::size_t used = 0;
      try {
        v[col] = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size()) {
        throw UsageError("schedule csv: bad number '" + cell + "' on line " +
                         std::to_string(line_no));
      }
      ++col;
    }
    if (col != 4) throw UsageError("schedule csv: expected 4 columns on line " + std::to_string(line_no));
    if (v[0] < 0.0) throw UsageError("schedule csv: negative duration on line " + std::to_string(line_no));
    schedule.segments.push_back({v[0], v[1], v[2], v[3]});
  }
  return schedule;
}

}  // namespace jcprog

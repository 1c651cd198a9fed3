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
 * Command-line front end. `run` is the whole program; `main` only forwards
 * to it so the commands can be driven from tests.
 *
 * Exit codes: 0 success, 1 quantitative failure (threshold missed, no
 * convergence, infeasible circuit), 2 usage error. Nothing is written to an
 * output file on exit 2.
 */

#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jcprog/dynamics.hpp"
#include "jcprog/io.hpp"
#include "jcprog/processor.hpp"
#include "jcprog/random.hpp"
#include "jcprog/sequence.hpp"
#include "jcprog/synthesis.hpp"

namespace jcprog::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Sequences shipped with the library, addressable by `--builtin`.
inline std::optional<ControlSequence> builtin_sequence(const std::string& name) {
  if (name == "cnot") return canonical_cnot_sequence();
  if (name == "swap") return canonical_swap_sequence();
  return std::nullopt;
}

/// Named target or `random:SEED` (Haar-random 8x8 unitary).
inline GateTarget resolve_target(const std::string& spec) {
  if (auto named = named_target(spec)) return *named;
  constexpr std::string_view kRandom = "random:";
  if (spec.rfind(kRandom, 0) == 0) {
    const std::string digits = spec.substr(kRandom.size());
    std::size_t used = 0;
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (digits.empty() || used != digits.size() || digits.front() == '-') {
      throw UsageError("bad random target '" + spec + "'");
    }
    auto rng = make_stream(seed, 0);
    return {spec, random_unitary(kSubspaceDim, rng)};
  }
  std::string known;
  for (const auto& n : named_target_names()) known += (known.empty() ? "" : ", ") + n;
  throw UsageError("unknown target '" + spec + "' (known: " + known + ", random:SEED)");
}

inline Pattern resolve_pattern(const std::string& name) {
  if (name == "canonical") return canonical_pattern();
  if (name == "two-axis") return two_axis_pattern();
  throw UsageError("unknown pattern '" + name + "' (canonical, two-axis)");
}

/// Parses "a:b" into two positive numbers.
inline std::pair<double, double> parse_band(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("band must be MIN:MAX, got '" + text + "'");
  try {
    std::size_t ua = 0;
    std::size_t ub = 0;
    const std::string a = text.substr(0, colon);
    const std::string b = text.substr(colon + 1);
    const double lo = std::stod(a, &ua);
    const double hi = std::stod(b, &ub);
    if (ua != a.size() || ub != b.size()) throw std::invalid_argument("trailing");
    return {lo, hi};
  } catch (const std::exception&) {
    throw UsageError("band must be MIN:MAX, got '" + text + "'");
  }
}

namespace detail {

/// Writes `text` to `path`, or to `out` when `path` is empty.
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  file << text;
  if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline ControlSequence load_sequence(const std::string& file, const std::string& builtin) {
  if (!file.empty() && !builtin.empty()) throw UsageError("give either --sequence or --builtin");
  if (!builtin.empty()) {
    if (auto seq = builtin_sequence(builtin)) return *seq;
    throw UsageError("unknown builtin sequence '" + builtin + "' (cnot, swap)");
  }
  if (file.empty()) throw UsageError("one of --sequence or --builtin is required");
  return sequence_from_json(read_json_file(file));
}

struct ResourceOptions {
  ResourceParams params;
  std::string band = "5e9:15e9";

  void add_to(CLI::App& app) {
    app.add_option("--omega", params.rabi, "Vacuum Rabi frequency (rad/s)");
    app.add_option("--T", params.coherence_time, "Coherence time (s)");
    app.add_option("--band", band, "Mode band MIN:MAX (Hz)");
    app.add_option("--spacing", params.mode_spacing, "Mode spacing (Hz)");
    app.add_option("--ops-per-gate", params.ops_per_gate, "Machine operations per gate");
    app.add_option("--overhead", params.rotation_overhead,
                   "Rotation segment time relative to one entangler");
    app.add_option("--Q", params.quality_factor, "Cavity quality factor");
  }

  ResourceParams resolve() {
    std::tie(params.band_min, params.band_max) = parse_band(band);
    params.validate();
    return params;
  }
};

}  // namespace detail

/// Runs one command. `out` receives reports that have no output file and
/// the estimate/compile tables; `err` receives diagnostics.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Programming a multimode cavity through one controllable qubit", "jcprog"};
  app.require_subcommand(1);

  // verify
  std::string sequence_file;
  std::string builtin;
  std::string target_name;
  std::string out_path;
  double threshold = 0.98;
  auto* verify_cmd = app.add_subcommand("verify", "Check a sequence against a target gate");
  verify_cmd->add_option("--sequence", sequence_file, "Sequence JSON file");
  verify_cmd->add_option("--builtin", builtin, "Built-in sequence: cnot, swap");
  verify_cmd->add_option("--target", target_name, "Target gate")->required();
  verify_cmd->add_option("--threshold", threshold, "Fidelity needed for success");
  verify_cmd->add_option("--out", out_path, "Report file (default stdout)");

  // synthesize
  OptimizationConfig opt;
  std::string pattern_name = "canonical";
  std::string trace_path;
  std::string seq_name;
  auto* synth_cmd = app.add_subcommand("synthesize", "Find sigmas that realize a target");
  synth_cmd->add_option("--target", target_name, "Target gate or random:SEED")->required();
  synth_cmd->add_option("--M", opt.step_count, "Number of steps");
  synth_cmd->add_option("--pattern", pattern_name, "Step pattern: canonical, two-axis");
  synth_cmd->add_option("--seed", opt.seed, "Random seed");
  synth_cmd->add_option("--restarts", opt.restarts, "Multi-start restarts");
  synth_cmd->add_option("--max-iter", opt.max_iterations, "L-BFGS iterations per restart");
  synth_cmd->add_option("--tol", opt.tolerance, "Infidelity convergence threshold");
  synth_cmd->add_option("--threads", opt.threads, "Concurrent restarts (result unaffected)");
  synth_cmd->add_option("--name", seq_name, "Name stored in the sequence file");
  synth_cmd->add_option("--out", out_path, "Sequence file (default stdout)");
  synth_cmd->add_option("--trace", trace_path, "Infidelity trace file");

  // validate
  MachineConfig machine;
  std::optional<double> omega;
  std::optional<double> ratio;
  std::optional<double> delta;
  std::optional<double> max_infidelity;
  std::string csv_path;
  auto* validate_cmd =
      app.add_subcommand("validate", "Compare full dynamics with the subspace model");
  validate_cmd->add_option("--sequence", sequence_file, "Sequence JSON file");
  validate_cmd->add_option("--builtin", builtin, "Built-in sequence: cnot, swap");
  validate_cmd->add_option("--omega", omega, "Rabi frequency of both modes (rad/s)");
  validate_cmd->add_option("--omega1", machine.rabi_1, "Rabi frequency of mode 1 (rad/s)");
  validate_cmd->add_option("--omega2", machine.rabi_2, "Rabi frequency of mode 2 (rad/s)");
  auto* delta_opt = validate_cmd->add_option("--delta", delta, "Half mode splitting (rad/s)");
  validate_cmd->add_option("--ratio", ratio, "Half mode splitting in units of the Rabi frequency")
      ->excludes(delta_opt);
  validate_cmd->add_option("--n-max", machine.n_max, "Photon truncation per mode");
  validate_cmd->add_option("--max-infidelity", max_infidelity,
                           "Exit 1 when the phase-robust infidelity exceeds this");
  validate_cmd->add_option("--out", out_path, "Report file (default stdout)");
  validate_cmd->add_option("--schedule-csv", csv_path, "Write the compiled pulse schedule");

  // estimate
  detail::ResourceOptions resources;
  auto* estimate_cmd = app.add_subcommand("estimate", "Gate and mode budget");
  resources.add_to(*estimate_cmd);

  // compile
  std::string circuit_path;
  std::optional<int> modes;
  detail::ResourceOptions compile_resources;
  auto* compile_cmd = app.add_subcommand("compile", "Cost a register circuit");
  compile_cmd->add_option("--circuit", circuit_path, "Circuit file")->required();
  compile_cmd->add_option("--modes", modes, "Register size (default: band capacity)");
  compile_resources.add_to(*compile_cmd);

  // export
  auto* export_cmd = app.add_subcommand("export", "Write a built-in sequence as JSON");
  export_cmd->add_option("--builtin", builtin, "Built-in sequence: cnot, swap")->required();
  export_cmd->add_option("--out", out_path, "Sequence file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (verify_cmd->parsed()) {
      const ControlSequence seq = detail::load_sequence(sequence_file, builtin);
      const GateTarget target = resolve_target(target_name);
      if (!(threshold > 0.0 && threshold <= 1.0)) throw UsageError("threshold must be in (0, 1]");
      VerificationReport report = verify(seq, target, threshold);
      report.target_reachability_defect = reachability_defect(target.matrix);
      detail::emit(out_path, detail::dump(report_to_json(report)), out);
      if (!report.reproduced) err << report.discrepancy << "\n";
      return report.reproduced ? kExitSuccess : kExitFailure;
    }

    if (synth_cmd->parsed()) {
      const GateTarget target = resolve_target(target_name);
      opt.pattern = resolve_pattern(pattern_name);
      opt.validate();
      if (opt.below_parameter_bound()) {
        err << "note: M = " << opt.step_count << " is below " << kParameterBound
            << " parameters; general targets are not expected to converge\n";
      }
      const SynthesisResult result = synthesize(target, opt);
      const std::string name =
          seq_name.empty() ? target.name + "-" + std::to_string(opt.step_count) : seq_name;
      detail::emit(out_path, detail::dump(synthesis_to_json(result, name, target.name)), out);
      if (!trace_path.empty()) {
        std::ostringstream trace;
        write_trace(result.trace, trace);
        detail::emit(trace_path, trace.str(), out);
      }
      if (!result.converged) {
        err << "not converged: infidelity " << result.infidelity << " after "
            << result.restarts_used << " restarts\n";
      }
      return result.converged ? kExitSuccess : kExitFailure;
    }

    if (validate_cmd->parsed()) {
      const ControlSequence seq = detail::load_sequence(sequence_file, builtin);
      if (omega) machine.rabi_1 = machine.rabi_2 = *omega;
      if (delta) machine.half_detuning = *delta;
      if (ratio) machine.half_detuning = *ratio * std::max(machine.rabi_1, machine.rabi_2);
      machine.validate();
      if (machine.n_max < kTrappingLevel) throw UsageError("--n-max must be at least 2");
      if (machine.off_resonance_warning()) {
        err << "warning: off-resonance ratio " << machine.off_resonance_ratio()
            << " exceeds 0.1; the subspace model is not expected to hold\n";
      }
      const PulseSchedule schedule = compile_schedule(seq, machine);
      const ValidationReport report = validate(seq, machine);
      if (!csv_path.empty()) {
        std::ostringstream csv;
        write_schedule_csv(schedule, csv);
        detail::emit(csv_path, csv.str(), out);
      }
      detail::emit(out_path, detail::dump(report_to_json(report)), out);
      const bool ok = !max_infidelity || report.phase_robust_infidelity <= *max_infidelity;
      return ok ? kExitSuccess : kExitFailure;
    }

    if (estimate_cmd->parsed()) {
      const ResourceParams params = resources.resolve();
      const GateBudget budget = gate_budget(params);
      const int capacity = modes_capacity(params);
      std::ostringstream table;
      table << std::left << std::setprecision(6);
      const auto row = [&](const std::string& label, const auto& value) {
        table << std::setw(28) << label << value << "\n";
      };
      row("entangler duration (s)", budget.entangler_duration);
      row("operation duration (s)", operation_duration(params));
      row("gate duration (s)", budget.gate_duration);
      row("coherence time (s)", params.coherence_time);
      row("gates in coherence", budget.gates_in_coherence);
      row("modes in band", capacity);
      row("Q/f at band top (s)", budget.q_limited_lifetime);
      row("T within Q/f", budget.coherence_consistent_with_q ? "yes" : "no");
      out << table.str();
      if (!budget.coherence_consistent_with_q) {
        err << "note: coherence time exceeds Q/f at the band top\n";
      }
      return kExitSuccess;
    }

    if (compile_cmd->parsed()) {
      const ResourceParams params = compile_resources.resolve();
      std::ifstream in(circuit_path);
      if (!in) throw UsageError("cannot open '" + circuit_path + "'");
      const Circuit circuit = parse_circuit(in);
      const int register_modes = modes.value_or(modes_capacity(params));
      const CircuitCost cost = compile_circuit(circuit, params, register_modes);
      out << std::left << std::setprecision(6);
      out << std::setw(28) << "gates" << circuit.size() << "\n";
      out << std::setw(28) << "register modes" << register_modes << "\n";
      out << std::setw(28) << "machine operations" << cost.machine_ops << "\n";
      out << std::setw(28) << "duration (s)" << cost.duration << "\n";
      out << std::setw(28) << "coherence time (s)" << params.coherence_time << "\n";
      out << std::setw(28) << "feasible" << (cost.feasible ? "yes" : "no") << "\n";
      return cost.feasible ? kExitSuccess : kExitFailure;
    }

    if (export_cmd->parsed()) {
      const ControlSequence seq = detail::load_sequence({}, builtin);
      detail::emit(out_path, detail::dump(sequence_to_json(seq)), out);
      return kExitSuccess;
    }
  } catch (const std::invalid_argument& e) {
    // UsageError, ConfigurationError, JsonInputError.
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace jcprog::cli

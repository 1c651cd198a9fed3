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
 * JSON documents: control sequences and the reports produced by the
 * verify, synthesize and validate commands.
 *
 * Sequence schema:
 *
 *   {
 *     "name": "published-cnot-72",
 *     "pattern": [{"entangler": "A", "axis": "x"}, ...],
 *     "sigmas": [-0.2872, ...],
 *     "convention": {"sigma_order": "as_listed", "sigma_z_sign": 1},
 *     "synthesis": {...}            // optional, written by synthesize
 *   }
 *
 * `pattern` has one entry per sigma, or a shorter cycle that is repeated.
 */

#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "jcprog/dynamics.hpp"
#include "jcprog/sequence.hpp"
#include "jcprog/synthesis.hpp"

namespace jcprog {

using Json = nlohmann::ordered_json;

/// Malformed or schema-violating JSON input.
class JsonInputError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Parses `text`, reporting syntax errors as "source:line:column: message".
inline Json parse_json_text(const std::string& text, const std::string& source = "<input>") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find(": ", what.find("column")); pos != std::string::npos) {
      what = what.substr(pos + 2);
    }
    throw JsonInputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + what);
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), path);
}

namespace detail {

template <class T>
T require(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw JsonInputError(std::string(where) + ": missing key '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw JsonInputError(std::string(where) + ": key '" + key + "' has the wrong type");
  }
}

inline void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                                const char* where) {
  if (!j.is_object()) throw JsonInputError(std::string(where) + ": expected an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw JsonInputError(std::string(where) + ": unknown key '" + item.key() + "'");
  }
}

inline Axis parse_axis(const std::string& s) {
  if (s == "x") return Axis::kX;
  if (s == "y") return Axis::kY;
  if (s == "z") return Axis::kZ;
  throw JsonInputError("unknown axis '" + s + "'");
}

inline Entangler parse_entangler(const std::string& s) {
  if (s == "A") return Mode::kFirst;
  if (s == "B") return Mode::kSecond;
  throw JsonInputError("unknown entangler '" + s + "'");
}

inline SigmaOrder parse_sigma_order(const std::string& s) {
  if (s == "as_listed") return SigmaOrder::kAsListed;
  if (s == "reversed") return SigmaOrder::kReversed;
  throw JsonInputError("unknown sigma_order '" + s + "'");
}

}  // namespace detail

inline Json convention_to_json(const Convention& c) {
  return Json{{"sigma_order", to_string(c.sigma_order)}, {"sigma_z_sign", c.sigma_z_sign}};
}

inline Convention convention_from_json(const Json& j) {
  detail::reject_unknown_keys(j, {"sigma_order", "sigma_z_sign"}, "convention");
  Convention c;
  c.sigma_order = detail::parse_sigma_order(detail::require<std::string>(j, "sigma_order", "convention"));
  c.sigma_z_sign = detail::require<int>(j, "sigma_z_sign", "convention");
  if (c.sigma_z_sign != 1 && c.sigma_z_sign != -1) {
    throw JsonInputError("convention: sigma_z_sign must be 1 or -1");
  }
  return c;
}

inline Json pattern_to_json(const Pattern& pattern) {
  Json arr = Json::array();
  for (const PatternSlot& s : pattern) {
    arr.push_back({{"entangler", entangler_name(s.entangler)}, {"axis", to_string(s.axis)}});
  }
  return arr;
}

inline Pattern pattern_from_json(const Json& j) {
  if (!j.is_array()) throw JsonInputError("pattern: expected an array");
  Pattern pattern;
  for (const Json& slot : j) {
    detail::reject_unknown_keys(slot, {"entangler", "axis"}, "pattern entry");
    pattern.push_back(
        {detail::parse_entangler(detail::require<std::string>(slot, "entangler", "pattern entry")),
         detail::parse_axis(detail::require<std::string>(slot, "axis", "pattern entry"))});
  }
  return pattern;
}

inline Json sequence_to_json(const ControlSequence& seq) {
  Pattern per_step;
  Json sigmas = Json::array();
  for (const Step& s : seq.steps) {
    per_step.push_back({s.entangler, s.axis});
    sigmas.push_back(s.sigma);
  }
  return Json{{"name", seq.name},
              {"pattern", pattern_to_json(per_step)},
              {"sigmas", sigmas},
              {"convention", convention_to_json(seq.convention)}};
}

inline ControlSequence sequence_from_json(const Json& j) {
  detail::reject_unknown_keys(j, {"name", "pattern", "sigmas", "convention", "synthesis"},
                              "sequence");
  const auto sigmas = detail::require<std::vector<double>>(j, "sigmas", "sequence");
  if (!j.contains("pattern")) throw JsonInputError("sequence: missing key 'pattern'");
  const Pattern pattern = pattern_from_json(j.at("pattern"));
  if (pattern.empty() && !sigmas.empty()) throw JsonInputError("sequence: empty pattern");
  if (pattern.size() > sigmas.size() && !sigmas.empty()) {
    throw JsonInputError("sequence: pattern longer than sigmas");
  }
  ControlSequence seq = make_sequence(pattern, sigmas, j.value("name", std::string{}));
  if (j.contains("convention")) seq.convention = convention_from_json(j.at("convention"));
  return seq;
}

inline Json matrix_to_json(const SubspaceMatrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

inline SubspaceMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.size() != kSubspaceDim) {
    throw JsonInputError("matrix: expected 8 rows");
  }
  SubspaceMatrix m;
  for (int r = 0; r < kSubspaceDim; ++r) {
    const Json& row = j.at(r);
    if (!row.is_array() || row.size() != kSubspaceDim) throw JsonInputError("matrix: expected 8 columns");
    for (int c = 0; c < kSubspaceDim; ++c) {
      const Json& e = row.at(c);
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw JsonInputError("matrix: entries are [re, im] pairs");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Reports

inline Json report_to_json(const VerificationReport& r) {
  Json readings = Json::array();
  for (const ReadingResult& rr : r.readings) {
    readings.push_back({{"convention", convention_to_json(rr.convention)}, {"fidelity", rr.fidelity}});
  }
  Json j{{"sequence", r.sequence_name},
         {"target", r.target_name},
         {"threshold", r.threshold},
         {"readings", readings},
         {"best_fidelity", r.best_fidelity},
         {"best_reading", convention_to_json(r.best_reading)},
         {"reproduced", r.reproduced}};
  if (r.target_reachability_defect) j["target_reachability_defect"] = *r.target_reachability_defect;
  if (!r.reproduced) {
    j["discrepancy"] = r.discrepancy;
    if (r.produced_unitary) j["produced_unitary"] = matrix_to_json(*r.produced_unitary);
  }
  return j;
}

inline VerificationReport verification_report_from_json(const Json& j) {
  constexpr const char* where = "verification report";
  detail::reject_unknown_keys(j,
                              {"sequence", "target", "threshold", "readings", "best_fidelity",
                               "best_reading", "reproduced", "target_reachability_defect",
                               "discrepancy", "produced_unitary"},
                              where);
  VerificationReport r;
  r.sequence_name = detail::require<std::string>(j, "sequence", where);
  r.target_name = detail::require<std::string>(j, "target", where);
  r.threshold = detail::require<double>(j, "threshold", where);
  for (const Json& rr : j.at("readings")) {
    r.readings.push_back({convention_from_json(rr.at("convention")),
                          detail::require<double>(rr, "fidelity", "reading")});
  }
  r.best_fidelity = detail::require<double>(j, "best_fidelity", where);
  r.best_reading = convention_from_json(j.at("best_reading"));
  r.reproduced = detail::require<bool>(j, "reproduced", where);
  if (j.contains("target_reachability_defect")) {
    r.target_reachability_defect = j.at("target_reachability_defect").get<double>();
  }
  if (j.contains("discrepancy")) r.discrepancy = j.at("discrepancy").get<std::string>();
  if (j.contains("produced_unitary")) r.produced_unitary = matrix_from_json(j.at("produced_unitary"));
  return r;
}

inline Json report_to_json(const ValidationReport& r) {
  return Json{{"leakage_out_of_subspace", r.leakage_out_of_subspace},
              {"strict_infidelity", r.strict_infidelity},
              {"phase_robust_infidelity", r.phase_robust_infidelity},
              {"off_resonance_ratio", r.off_resonance_ratio},
              {"segment_count", r.segment_count},
              {"total_duration_s", r.total_duration}};
}

inline ValidationReport validation_report_from_json(const Json& j) {
  constexpr const char* where = "validation report";
  detail::reject_unknown_keys(j,
                              {"leakage_out_of_subspace", "strict_infidelity",
                               "phase_robust_infidelity", "off_resonance_ratio", "segment_count",
                               "total_duration_s"},
                              where);
  ValidationReport r;
  r.leakage_out_of_subspace = detail::require<double>(j, "leakage_out_of_subspace", where);
  r.strict_infidelity = detail::require<double>(j, "strict_infidelity", where);
  r.phase_robust_infidelity = detail::require<double>(j, "phase_robust_infidelity", where);
  r.off_resonance_ratio = detail::require<double>(j, "off_resonance_ratio", where);
  r.segment_count = detail::require<int>(j, "segment_count", where);
  r.total_duration = detail::require<double>(j, "total_duration_s", where);
  return r;
}

/// The sequence document written by `synthesize`, with the optimizer
/// summary under "synthesis".
inline Json synthesis_to_json(const SynthesisResult& r, const std::string& name,
                              const std::string& target_name) {
  Json j = sequence_to_json(r.sequence(name));
  j["synthesis"] = Json{{"target", target_name},
                        {"infidelity", r.infidelity},
                        {"converged", r.converged},
                        {"restarts_used", r.restarts_used},
                        {"iterations", r.iterations},
                        {"gradient_norm", r.gradient_norm}};
  return j;
}

/// Reads back what `synthesis_to_json` wrote; the trace is stored
/// separately and is left empty.
inline SynthesisResult synthesis_from_json(const Json& j) {
  const ControlSequence seq = sequence_from_json(j);
  if (!j.contains("synthesis")) throw JsonInputError("sequence: missing 'synthesis' block");
  const Json& s = j.at("synthesis");
  constexpr const char* where = "synthesis";
  detail::reject_unknown_keys(
      s, {"target", "infidelity", "converged", "restarts_used", "iterations", "gradient_norm"}, where);
  SynthesisResult r;
  r.sigmas = seq.sigmas();
  // Recover the shortest repeating cycle.
  Pattern per_step;
  for (const Step& st : seq.steps) per_step.push_back({st.entangler, st.axis});
  std::size_t period = per_step.size();
  for (std::size_t p = 1; p < per_step.size(); ++p) {
    bool ok = true;
    for (std::size_t k = p; k < per_step.size() && ok; ++k) ok = per_step[k] == per_step[k - p];
    if (ok) {
      period = p;
      break;
    }
  }
  r.pattern.assign(per_step.begin(), per_step.begin() + static_cast<std::ptrdiff_t>(period));
  r.infidelity = detail::require<double>(s, "infidelity", where);
  r.converged = detail::require<bool>(s, "converged", where);
  r.restarts_used = detail::require<int>(s, "restarts_used", where);
  r.iterations = detail::require<int>(s, "iterations", where);
  r.gradient_norm = detail::require<double>(s, "gradient_norm", where);
  return r;
}

/// One infidelity per line, "iteration infidelity".
inline void write_trace(const std::vector<double>& trace, std::ostream& out) {
  out << std::setprecision(17);
  for (std::size_t i = 0; i < trace.size(); ++i) out << i << ' ' << trace[i] << '\n';
}

}  // namespace jcprog

// Copyright 2026 The qeffort Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON and CSV interchange. Matrices are row-major arrays of [re, im] pairs;
// CSV floats are written with 17 significant digits, header row first, comma
// delimited, LF line endings.

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qeffort/action.hpp"
#include "qeffort/berry.hpp"
#include "qeffort/difficulty.hpp"
#include "qeffort/effort.hpp"
#include "qeffort/evolution.hpp"
#include "qeffort/infidelity.hpp"
#include "qeffort/linalg.hpp"

namespace qeffort::io {

using json = nlohmann::json;

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Parsing

inline double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError(where + " must be a number");
  double x = j.get<double>();
  if (!std::isfinite(x)) throw ValidationError(where + " must be finite");
  return x;
}

inline cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {number_at(j, where), 0.0};
  if (!j.is_array() || j.size() != 2) throw ValidationError(where + " must be a [re, im] pair");
  return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

inline Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ValidationError(what + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw ValidationError(what + "[0] must be a non-empty row");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError(what + " row " + std::to_string(r) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = complex_from_json(row[c], what + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

inline Vector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ValidationError(what + " must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i], what + "[" + std::to_string(i) + "]");
  return v;
}

/// Parses a state; it must be normalized within 1e-12.
inline StateVector state_from_json(const json& j, const std::string& what) {
  Vector v = vector_from_json(j, what);
  try {
    return StateVector(v);
  } catch (const ValidationError& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + " is missing \"" + key + "\"");
  return j.at(key);
}

inline HamiltonianTrajectory trajectory_from_json(const json& j) {
  const std::string where = "hamiltonian";
  std::string kind = field(j, "kind", where).is_string() ? j.at("kind").get<std::string>() : "";
  Eigen::Index dim = 0;
  if (j.contains("dim")) {
    if (!j.at("dim").is_number_integer() || j.at("dim").get<long>() < 1) {
      throw ValidationError("hamiltonian.dim must be a positive integer");
    }
    dim = j.at("dim").get<long>();
  }
  auto check_dim = [&](const Matrix& m, const std::string& what) {
    if (m.rows() != m.cols()) throw ValidationError(what + " must be square");
    if (dim && m.rows() != dim) {
      throw ValidationError(what + " has dimension " + std::to_string(m.rows()) + ", expected " +
                            std::to_string(dim));
    }
    return m;
  };
  if (kind == "constant") {
    return HamiltonianTrajectory::constant(
        check_dim(matrix_from_json(field(j, "matrix", where), "hamiltonian.matrix"), "hamiltonian.matrix"));
  }
  if (kind == "piecewise") {
    const auto& segs = field(j, "segments", where);
    if (!segs.is_array()) throw ValidationError("hamiltonian.segments must be an array");
    std::vector<PiecewiseSegment> out;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      std::string w = "hamiltonian.segments[" + std::to_string(i) + "]";
      out.push_back({number_at(field(segs[i], "duration", w), w + ".duration"),
                     check_dim(matrix_from_json(field(segs[i], "matrix", w), w + ".matrix"), w + ".matrix")});
    }
    return HamiltonianTrajectory::piecewise(out);
  }
  if (kind == "interpolated") {
    const auto& samples = field(j, "samples", where);
    if (!samples.is_array()) throw ValidationError("hamiltonian.samples must be an array");
    std::vector<InterpolationSample> out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      std::string w = "hamiltonian.samples[" + std::to_string(i) + "]";
      out.push_back({number_at(field(samples[i], "time", w), w + ".time"),
                     check_dim(matrix_from_json(field(samples[i], "matrix", w), w + ".matrix"), w + ".matrix")});
    }
    return HamiltonianTrajectory::interpolated(out);
  }
  throw ValidationError("hamiltonian.kind must be \"constant\", \"piecewise\" or \"interpolated\"");
}

// ---------------------------------------------------------------------------
// Serialization

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline json to_json(const HamiltonianTrajectory& h) {
  json j{{"dim", h.dim()}};
  switch (h.kind()) {
    case HamiltonianTrajectory::Kind::constant:
      j["kind"] = "constant";
      j["matrix"] = to_json(h.matrices().front());
      break;
    case HamiltonianTrajectory::Kind::piecewise: {
      j["kind"] = "piecewise";
      json segs = json::array();
      for (std::size_t i = 0; i < h.matrices().size(); ++i) {
        segs.push_back({{"duration", h.knots()[i + 1] - h.knots()[i]}, {"matrix", to_json(h.matrices()[i])}});
      }
      j["segments"] = segs;
      break;
    }
    case HamiltonianTrajectory::Kind::interpolated: {
      j["kind"] = "interpolated";
      json samples = json::array();
      for (std::size_t i = 0; i < h.matrices().size(); ++i) {
        samples.push_back({{"time", h.knots()[i]}, {"matrix", to_json(h.matrices()[i])}});
      }
      j["samples"] = samples;
      break;
    }
  }
  return j;
}

inline json to_json(const EffortReport& r) {
  json areas = json::array();
  for (const auto& b : r.basis_areas) areas.push_back({{"label", b.label}, {"area", b.area}});
  return {{"alpha_line_integral", r.alpha_line_integral},
          {"alpha_energy_integral", r.alpha_energy_integral},
          {"alpha_action_expectation", r.alpha_action_expectation},
          {"area_swept", r.area_swept},
          {"basis_used", r.basis_used},
          {"basis_areas", areas},
          {"max_pairwise_discrepancy", r.max_pairwise_discrepancy},
          {"state_path_discrepancy", r.state_path_discrepancy},
          {"tolerance", r.tolerance},
          {"consistent", r.consistent()}};
}

inline json to_json(const DifficultyResult& d) {
  return {{"value", d.value},
          {"optimal_hamiltonian", to_json(d.optimal_hamiltonian)},
          {"duration", d.duration},
          {"convention", d.convention}};
}

inline json to_json(const BlochDecomposition& b) {
  return {{"alpha", b.alpha}, {"theta", b.theta}, {"axis", {b.axis[0], b.axis[1], b.axis[2]}}};
}

inline json to_json(const InfidelityPlan& p) {
  const auto& r = p.realization;
  return {{"target_infidelity", p.target_infidelity},
          {"energy", p.energy},
          {"rotation_angle", p.rotation_angle},
          {"state_effort", p.state_effort},
          {"worst_case_effort", p.worst_case_effort},
          {"min_time_at_state_energy", p.min_time_at_state_energy},
          {"min_time_at_max_energy", p.min_time_at_max_energy},
          {"realization",
           {{"hamiltonian", to_json(r.hamiltonian)},
            {"duration", r.duration},
            {"initial_state", to_json(r.initial_state.amplitudes())},
            {"final_state", to_json(r.final_state.amplitudes())},
            {"measured_state_effort", r.measured_state_effort},
            {"measured_infidelity", r.measured_infidelity}}}};
}

inline json to_json(const BerryCheckResult& b) {
  json ch = json::array();
  for (const auto& c : b.channels) {
    ch.push_back({{"channel", c.channel},
                  {"phi", c.phi},
                  {"alpha", c.alpha},
                  {"beta_residual", c.beta_residual},
                  {"degenerate", c.degenerate}});
  }
  return {{"tau", b.tau}, {"channels", ch}, {"max_abs_residual", b.max_abs_residual()}};
}

inline json to_json(const LevitinComparison& l) {
  return {{"theta", l.theta},
          {"specific_state_effort", l.specific_state_effort},
          {"worst_case_effort", l.worst_case_effort}};
}

inline json to_json(const std::vector<GateRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back({{"gate", r.name}, {"difficulty", r.difficulty}});
  return out;
}

// ---------------------------------------------------------------------------
// CSV. Column orders are frozen; see README.

/// time,channel,eigenphase,winding,degenerate
inline void write_action_csv(std::ostream& os, const ActionTrack& track) {
  os << "time,channel,eigenphase,winding,degenerate\n";
  for (const auto& s : track.steps) {
    for (Eigen::Index i = 0; i < s.phases.size(); ++i) {
      os << fmt17(s.time) << ',' << i << ',' << fmt17(s.phases(i)) << ',' << s.windings[i] << ','
         << (s.degenerate[i] ? 1 : 0) << '\n';
    }
  }
}

/// time,basis,index,re,im: coefficients <b_index|psi(t)> in each labeled basis.
inline void write_coefficients_csv(std::ostream& os, const std::vector<TimedState>& states,
                                   const std::vector<LabeledBasis>& bases) {
  os << "time,basis,index,re,im\n";
  for (const auto& s : states) {
    for (const auto& b : bases) {
      Vector c = b.vectors.adjoint() * s.state.amplitudes();
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        os << fmt17(s.time) << ',' << b.label << ',' << i << ',' << fmt17(c(i).real()) << ','
           << fmt17(c(i).imag()) << '\n';
      }
    }
  }
}

/// gate,difficulty
inline void write_gate_table_csv(std::ostream& os, const std::vector<GateRow>& rows) {
  os << "gate,difficulty\n";
  for (const auto& r : rows) os << r.name << ',' << fmt17(r.difficulty) << '\n';
}

/// channel,phi,alpha,beta_residual
inline void write_berry_csv(std::ostream& os, const BerryCheckResult& b) {
  os << "channel,phi,alpha,beta_residual\n";
  for (const auto& c : b.channels) {
    os << c.channel << ',' << fmt17(c.phi) << ',' << fmt17(c.alpha) << ',' << fmt17(c.beta_residual) << '\n';
  }
}

/// theta,specific_state_effort,worst_case_effort
inline void write_levitin_csv(std::ostream& os, const std::vector<LevitinComparison>& rows) {
  os << "theta,specific_state_effort,worst_case_effort\n";
  for (const auto& r : rows) {
    os << fmt17(r.theta) << ',' << fmt17(r.specific_state_effort) << ',' << fmt17(r.worst_case_effort) << '\n';
  }
}

}  // namespace qeffort::io

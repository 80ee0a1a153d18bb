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

// qeffort: runs one computation described by a JSON problem file.
//
// Exit status: 0 success, 2 validation error, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qeffort/io.hpp"
#include "qeffort/qeffort.hpp"

namespace {

using namespace qeffort;
using io::json;

struct Overrides {
  std::uint64_t seed = 1;
  std::optional<double> step;
  std::optional<double> tolerance;
  bool quiet = false;
};

struct Output {
  json report;
  std::string csv;
};

StepPolicy policy_for(const HamiltonianTrajectory& h, const Overrides& o) {
  StepPolicy p = default_step_policy(h);
  if (o.step) p.max_step = *o.step;
  if (o.tolerance) p.tolerance = *o.tolerance;
  p.validate();
  return p;
}

double positive(const json& j, const char* key, const std::string& where) {
  double x = io::number_at(io::field(j, key, where), where + "." + key);
  if (!(x > 0.0)) throw ValidationError(where + "." + key + " must be positive");
  return x;
}

std::vector<LabeledBasis> bases_from(const json& p, Eigen::Index dim) {
  std::vector<LabeledBasis> out;
  if (!p.contains("bases")) return out;
  const auto& bs = p.at("bases");
  if (!bs.is_array()) throw ValidationError("bases must be an array");
  for (std::size_t i = 0; i < bs.size(); ++i) {
    std::string w = "bases[" + std::to_string(i) + "]";
    std::string label = bs[i].value("label", "basis" + std::to_string(i));
    Matrix m = io::matrix_from_json(io::field(bs[i], "matrix", w), w + ".matrix");
    if (m.rows() != dim || m.cols() != dim) throw ValidationError(w + ".matrix has the wrong dimension");
    require_unitary(m, (w + ".matrix").c_str(), 1e-9);
    out.push_back({label, m});
  }
  return out;
}

Output task_evolve(const json& p, const Overrides& o) {
  auto h = io::trajectory_from_json(io::field(p, "hamiltonian", "problem"));
  double t_end = positive(p, "t_end", "problem");
  auto traj = evolve(h, t_end, policy_for(h, o));
  auto track = track_action(traj);
  const auto& last = track.steps.back();
  json windings = last.windings;
  std::vector<double> phases(last.phases.data(), last.phases.data() + last.phases.size());
  json report{{"task", "evolve"},
              {"samples", traj.size()},
              {"max_step", traj.policy.max_step},
              {"t_end", traj.end_time()},
              {"final_unitary", io::to_json(traj.unitaries.back())},
              {"final_action", io::to_json(action_at(track, traj.end_time()).matrix)},
              {"eigenphases", phases},
              {"windings", windings}};
  std::ostringstream csv;
  io::write_action_csv(csv, track);
  return {report, csv.str()};
}

Output task_effort(const json& p, const Overrides& o) {
  auto h = io::trajectory_from_json(io::field(p, "hamiltonian", "problem"));
  auto psi = io::state_from_json(io::field(p, "initial_state", "problem"), "initial_state");
  if (psi.dim() != h.dim()) throw ValidationError("initial_state dimension does not match hamiltonian");
  double t_end = positive(p, "t_end", "problem");
  auto bases = bases_from(p, h.dim());
  auto policy = policy_for(h, o);
  auto rep = effort_report(h, psi, t_end, bases, policy);
  json report = io::to_json(rep);
  report["task"] = "effort";
  if (bases.empty()) bases.push_back({"computational", identity(h.dim())});
  std::ostringstream csv;
  io::write_coefficients_csv(csv, state_trajectory(evolve(h, t_end, policy), psi), bases);
  return {report, csv.str()};
}

Output task_area(const json& p, const Overrides& o) {
  auto h = io::trajectory_from_json(io::field(p, "hamiltonian", "problem"));
  auto psi = io::state_from_json(io::field(p, "initial_state", "problem"), "initial_state");
  if (psi.dim() != h.dim()) throw ValidationError("initial_state dimension does not match hamiltonian");
  double t_end = positive(p, "t_end", "problem");
  Matrix basis = identity(h.dim());
  if (p.contains("basis")) {
    basis = io::matrix_from_json(p.at("basis"), "basis");
    if (basis.rows() != h.dim() || basis.cols() != h.dim()) throw ValidationError("basis has the wrong dimension");
  }
  auto states = state_trajectory(evolve(h, t_end, policy_for(h, o)), psi);
  auto area = area_swept_detail(states, basis);
  json report{{"task", "area"}, {"total", area.total}, {"per_channel", area.per_channel}};
  std::ostringstream csv;
  csv << "channel,area\n";
  for (std::size_t i = 0; i < area.per_channel.size(); ++i) csv << i << ',' << io::fmt17(area.per_channel[i]) << '\n';
  return {report, csv.str()};
}

Output key_values(json report) {
  std::ostringstream csv;
  csv << "quantity,value\n";
  for (auto& [k, v] : report.items()) {
    if (v.is_number()) csv << k << ',' << io::fmt17(v.get<double>()) << '\n';
  }
  return {std::move(report), csv.str()};
}

Output task_difficulty(const json& p, const Overrides&) {
  if (p.contains("circuit")) {
    const auto& c = p.at("circuit");
    if (!c.is_array()) throw ValidationError("circuit must be an array");
    std::vector<CircuitGate> gates;
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::string w = "circuit[" + std::to_string(i) + "]";
      const auto& g = io::field(c[i], "gate", w);
      const auto& wires = io::field(c[i], "wires", w);
      if (!g.is_string()) throw ValidationError(w + ".gate must be a string");
      if (!wires.is_array()) throw ValidationError(w + ".wires must be an array");
      CircuitGate cg{g.get<std::string>(), {}};
      for (const auto& x : wires) {
        if (!x.is_number_integer()) throw ValidationError(w + ".wires must hold integers");
        cg.wires.push_back(x.get<int>());
      }
      gates.push_back(cg);
    }
    return key_values({{"task", "difficulty"}, {"effort_bound", classical_circuit_effort_bound(gates)}});
  }
  Matrix u = io::matrix_from_json(io::field(p, "unitary", "problem"), "unitary");
  double duration = p.contains("duration") ? positive(p, "duration", "problem") : 1.0;
  auto d = difficulty_u2(u, duration);
  json report = io::to_json(d);
  report["task"] = "difficulty";
  report["bloch"] = io::to_json(bloch_decompose(u));
  return key_values(report);
}

Output task_controlled(const json& p, const Overrides&) {
  Matrix u = io::matrix_from_json(io::field(p, "unitary", "problem"), "unitary");
  const auto& n = io::field(p, "controls", "problem");
  if (!n.is_number_integer() || n.get<int>() < 1) throw ValidationError("controls must be a positive integer");
  double duration = p.contains("duration") ? positive(p, "duration", "problem") : 1.0;
  auto d = difficulty_controlled(u, n.get<int>(), duration);
  json report = io::to_json(d);
  report["task"] = "controlled";
  report["controls"] = n.get<int>();
  report["dim"] = d.optimal_hamiltonian.rows();
  return key_values(report);
}

Output task_infidelity(const json& p, const Overrides&) {
  double target = io::number_at(io::field(p, "infidelity", "problem"), "infidelity");
  double energy = p.contains("energy") ? positive(p, "energy", "problem") : 1.0;
  std::optional<StateVector> v;
  if (p.contains("state")) v = io::state_from_json(p.at("state"), "state");
  json report = io::to_json(plan_infidelity(target, energy, v));
  report["task"] = "infidelity";
  return key_values(report);
}

Output task_ml_check(const json& p, const Overrides& o) {
  int draws = p.value("draws", 1000);
  int max_cycle = p.value("max_cycle", 8);
  if (draws < 0 || max_cycle < 2) throw ValidationError("draws must be >= 0 and max_cycle >= 2");
  Random rng(o.seed);
  // Saturating case: equal superposition under diag(1, 0).
  Matrix sat = Matrix::Zero(2, 2);
  sat(0, 0) = 1.0;
  auto plus = StateVector::normalized((Vector(2) << 1.0, 1.0).finished());
  auto t_sat = orthogonalization_time(HamiltonianTrajectory::constant(sat), plus, 10.0);

  int found = 0, violations = 0;
  double min_ratio = INFINITY;
  for (int i = 0; i < draws; ++i) {
    // Alternate constructions that do orthogonalize with generic draws.
    Eigen::Index n = 2 + i % 5;
    Matrix basis = rng.unitary(n);
    RealVector levels(n);
    StateVector psi = rng.state(n);
    double offset = rng.uniform(-2.0, 2.0), gap = rng.uniform(0.2, 3.0);
    for (Eigen::Index k = 0; k < n; ++k) levels(k) = offset + gap * k;
    if (i % 2 == 0) {
      Vector c(n);
      for (Eigen::Index k = 0; k < n; ++k) c(k) = std::polar(1.0 / std::sqrt(double(n)), rng.uniform(0.0, 2.0 * kPi));
      psi = StateVector::normalized(basis * c);
    } else {
      for (Eigen::Index k = 0; k < n; ++k) levels(k) = offset + rng.uniform(0.0, 3.0);
    }
    Matrix h = hermitian_part(from_spectrum(basis, levels));
    double t_max = 4.0 * kPi / gap;
    auto t = orthogonalization_time(HamiltonianTrajectory::constant(h), psi, t_max);
    if (!t) continue;
    ++found;
    double ratio = *t * mean_energy_above_ground(h, psi);
    min_ratio = std::min(min_ratio, ratio);
    if (ratio < kPi / 2.0 - 1e-6) ++violations;
  }
  json cycles = json::array();
  for (int n = 2; n <= max_cycle; ++n) {
    cycles.push_back({{"n", n}, {"effort", cycle_transition_effort(n)}, {"bound", kPi * (n - 1) / n}});
  }
  json report{{"task", "ml-check"},
              {"seed", o.seed},
              {"saturation_time", t_sat ? json(*t_sat) : json(nullptr)},
              {"draws", draws},
              {"orthogonalizing_draws", found},
              {"violations", violations},
              {"min_time_energy_product", found ? json(min_ratio) : json(nullptr)},
              {"bound", kPi / 2.0},
              {"cycles", cycles}};
  std::ostringstream csv;
  csv << "n,effort,bound\n";
  for (const auto& c : cycles) {
    csv << c["n"].get<int>() << ',' << io::fmt17(c["effort"].get<double>()) << ','
        << io::fmt17(c["bound"].get<double>()) << '\n';
  }
  return {report, csv.str()};
}

Output task_berry(const json& p, const Overrides& o) {
  auto h = io::trajectory_from_json(io::field(p, "hamiltonian", "problem"));
  double tau = positive(p, "tau", "problem");
  auto r = aa_phase_check(h, tau, policy_for(h, o));
  json report = io::to_json(r);
  report["task"] = "berry";
  std::ostringstream csv;
  io::write_berry_csv(csv, r);
  return {report, csv.str()};
}

std::vector<double> angles(const json& p, const char* key, std::vector<double> fallback) {
  if (!p.contains(key)) return fallback;
  const auto& a = p.at(key);
  if (!a.is_array()) throw ValidationError(std::string(key) + " must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(io::number_at(a[i], std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

Output task_gate_table(const json& p, const Overrides&) {
  auto rows = gate_table(angles(p, "phase_angles", default_phase_grid()));
  json report{{"task", "gate-table"}, {"rows", io::to_json(rows)}};
  std::ostringstream csv;
  io::write_gate_table_csv(csv, rows);
  return {report, csv.str()};
}

Output task_levitin(const json& p, const Overrides&) {
  std::vector<LevitinComparison> rows;
  for (double th : angles(p, "thetas", {0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi})) rows.push_back(levitin_comparison(th));
  json out = json::array();
  for (const auto& r : rows) out.push_back(io::to_json(r));
  json report{{"task", "levitin"}, {"rows", out}};
  std::ostringstream csv;
  io::write_levitin_csv(csv, rows);
  return {report, csv.str()};
}

Output dispatch(const json& problem, const Overrides& o) {
  if (!problem.is_object()) throw ValidationError("problem file must hold a JSON object");
  const auto& task = io::field(problem, "task", "problem");
  if (!task.is_string()) throw ValidationError("task must be a string");
  const std::string t = task.get<std::string>();
  if (t == "evolve") return task_evolve(problem, o);
  if (t == "effort") return task_effort(problem, o);
  if (t == "area") return task_area(problem, o);
  if (t == "difficulty") return task_difficulty(problem, o);
  if (t == "controlled") return task_controlled(problem, o);
  if (t == "infidelity") return task_infidelity(problem, o);
  if (t == "ml-check") return task_ml_check(problem, o);
  if (t == "berry") return task_berry(problem, o);
  if (t == "gate-table") return task_gate_table(problem, o);
  if (t == "levitin") return task_levitin(problem, o);
  throw ValidationError("unknown task \"" + t + "\"");
}

int run(const std::string& path, const Overrides& o) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open problem file " + path);
  json problem;
  try {
    problem = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("problem file is not valid JSON: ") + e.what());
  }
  std::string format = "json", out_path;
  if (problem.contains("output")) {
    const auto& out = problem.at("output");
    if (!out.is_object()) throw ValidationError("output must be an object");
    format = out.value("format", "json");
    out_path = out.value("path", "");
    if (format != "json" && format != "csv") throw ValidationError("output.format must be \"json\" or \"csv\"");
  }
  Output result = dispatch(problem, o);
  std::string text = format == "json" ? result.report.dump(2) + "\n" : result.csv;
  if (out_path.empty()) {
    if (!o.quiet) std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + out_path);
    f << text;
    if (!o.quiet) std::cerr << "wrote " << out_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum computational effort calculator"};
  std::string problem;
  Overrides o;
  double step = 0.0, tol = 0.0;
  app.add_option("problem", problem, "JSON problem file")->required();
  app.add_option("--seed", o.seed, "Seed for randomized verifications");
  auto* step_opt = app.add_option("--step", step, "Override StepPolicy.max_step")->check(CLI::PositiveNumber);
  auto* tol_opt = app.add_option("--tolerance", tol, "Override StepPolicy.tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", o.quiet, "Suppress standard output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (*step_opt) o.step = step;
  if (*tol_opt) o.tolerance = tol;
  try {
    return run(problem, o);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  }
}

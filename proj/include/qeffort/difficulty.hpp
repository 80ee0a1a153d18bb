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

// Difficulty: the least worst-case effort needed to implement a unitary,
// with energies shifted so the ground eigenvalue of the action is zero.
//
// For U in U(2) write U = e^{i alpha} R_n(theta), R_n(theta) =
// e^{i (theta/2) n.sigma}. The steady rotation Hamiltonian
// (theta / 2t)(I + n.sigma) implements U up to global phase with worst-case
// effort theta. Its optimality is a conjecture; see optimality_search() for
// the numerical falsification check.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qeffort/effort.hpp"
#include "qeffort/error.hpp"
#include "qeffort/evolution.hpp"
#include "qeffort/linalg.hpp"

namespace qeffort {

struct BlochDecomposition {
  /// Global phase, in (-pi, pi].
  double alpha = 0.0;
  /// Rotation angle, normalized into [0, pi].
  double theta = 0.0;
  std::array<double, 3> axis{0.0, 0.0, 1.0};

  Matrix n_dot_sigma() const {
    return axis[0] * pauli_x() + axis[1] * pauli_y() + axis[2] * pauli_z();
  }
  /// e^{i alpha} R_n(theta).
  Matrix reconstruct() const {
    Matrix r = std::cos(theta / 2.0) * identity(2) + cplx(0.0, std::sin(theta / 2.0)) * n_dot_sigma();
    return std::polar(1.0, alpha) * r;
  }
};

namespace detail {
inline void require_u2(const Matrix& u) {
  require_square(u, "unitary");
  if (u.rows() != 2) {
    throw ValidationError("expected a 2x2 unitary, got dimension " + std::to_string(u.rows()));
  }
  require_unitary(u, "unitary", 1e-9);
}
}  // namespace detail

/// Splits a 2x2 unitary into global phase, rotation angle and axis.
///
/// theta is normalized to [0, pi] by choice of the det-root branch. At
/// theta = 0 the axis is (0, 0, 1). At theta = pi, where n and -n describe
/// the same rotation, the axis is chosen with n_z > 0, else n_x > 0, else
/// n_y = 1.
inline BlochDecomposition bloch_decompose(const Matrix& u) {
  detail::require_u2(u);
  BlochDecomposition b;
  b.alpha = 0.5 * principal_arg(u.determinant());
  Matrix v = std::polar(1.0, -b.alpha) * u;  // in SU(2)
  double c = 0.5 * v.trace().real();
  if (c < 0.0) {
    b.alpha += kPi;
    v = -v;
    c = -c;
  }
  // (V - V^dagger) / 2i = sin(theta/2) n.sigma
  Matrix s = (v - v.adjoint()) * cplx(0.0, -0.5);
  std::array<double, 3> w{s(0, 1).real(), -s(0, 1).imag(), 0.5 * (s(0, 0) - s(1, 1)).real()};
  double sn = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
  b.theta = 2.0 * std::atan2(sn, c);
  if (sn > 0.0) {
    b.axis = {w[0] / sn, w[1] / sn, w[2] / sn};
  } else {
    b.axis = {0.0, 0.0, 1.0};
    b.theta = 0.0;
  }
  constexpr double at_pi = 1e-12;
  if (c < at_pi) {
    auto& n = b.axis;
    bool flip = false;
    if (std::abs(n[2]) > at_pi) {
      flip = n[2] < 0.0;
    } else if (std::abs(n[0]) > at_pi) {
      flip = n[0] < 0.0;
    } else {
      flip = n[1] < 0.0;
    }
    if (flip) {
      // R_{-n}(pi) = -R_n(pi)
      n = {-n[0], -n[1], -n[2]};
      b.alpha += kPi;
    }
  }
  b.alpha = wrap_angle(b.alpha);
  return b;
}

struct DifficultyResult {
  double value = 0.0;
  Matrix optimal_hamiltonian;
  double duration = 1.0;
  std::string convention = "ground-zero";
};

/// (theta / 2t)(I + n.sigma): eigenvalues {0, theta/t}, eigenvectors v_n^-
/// and v_n^+. exp_i(H t) = e^{i theta/2} R_n(theta), i.e. U up to global phase.
/// The identity (theta = 0) gives the zero matrix.
inline Matrix optimal_hamiltonian(const Matrix& u, double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ValidationError("duration must be positive");
  }
  BlochDecomposition b = bloch_decompose(u);
  if (b.theta == 0.0) return Matrix::Zero(2, 2);
  return (b.theta / (2.0 * duration)) * (identity(2) + b.n_dot_sigma());
}

/// D+(U) = |theta| for U in U(2); the global phase does not contribute.
inline DifficultyResult difficulty_u2(const Matrix& u, double duration = 1.0) {
  DifficultyResult r;
  r.value = std::abs(bloch_decompose(u).theta);
  r.optimal_hamiltonian = optimal_hamiltonian(u, duration);
  r.duration = duration;
  return r;
}

/// Eigenvector of n.sigma with eigenvalue +1 (sign = +1) or -1 (sign = -1).
inline StateVector bloch_eigenvector(const std::array<double, 3>& n, int sign) {
  Vector v(2);
  const double nx = n[0], ny = n[1], nz = n[2];
  const cplx t(nx, ny);
  if (sign > 0) {
    if (nz > -1.0 + 1e-12) {
      v << nz + 1.0, t;
    } else {
      v << 0.0, 1.0;
    }
  } else if (nz < 1.0 - 1e-12 && std::abs(nz) > 1e-15) {
    v << nz - 1.0, t;
  } else if (nz >= 1.0 - 1e-12) {
    v << 0.0, 1.0;
  } else {
    // n_z = 0: |v0| = |v1| and v1 = (-n_x - i n_y) v0.
    v << 1.0, -t;
  }
  return StateVector::normalized(v);
}

/// Highest power of two dimension accepted by the controlled-U embedding.
inline constexpr Eigen::Index kMaxControlledDim = Eigen::Index{1} << 10;

inline Matrix controlled_unitary(const Matrix& u, int n_controls) {
  detail::require_u2(u);
  if (n_controls < 1) throw ValidationError("n_controls must be at least 1");
  if (n_controls + 1 > 10) {
    throw ValidationError("controlled dimension 2^" + std::to_string(n_controls + 1) +
                          " exceeds the cap of 2^10");
  }
  Eigen::Index dim = Eigen::Index{1} << (n_controls + 1);
  Matrix out = identity(dim);
  out.bottomRightCorner(2, 2) = u;
  return out;
}

/// C^n U: same difficulty as U, with H' zero except for the optimal 2x2
/// Hamiltonian in the lower-right block.
inline DifficultyResult difficulty_controlled(const Matrix& u, int n_controls,
                                              double duration = 1.0) {
  Matrix cu = controlled_unitary(u, n_controls);
  DifficultyResult base = difficulty_u2(u, duration);
  DifficultyResult r = base;
  r.optimal_hamiltonian = Matrix::Zero(cu.rows(), cu.cols());
  r.optimal_hamiltonian.bottomRightCorner(2, 2) = base.optimal_hamiltonian;
  return r;
}

/// d(U1, U2) = D+(U2 U1^dagger).
inline double unitary_distance(const Matrix& u1, const Matrix& u2) {
  if (u1.rows() != 2 || u2.rows() != 2 || u1.cols() != 2 || u2.cols() != 2) {
    throw ValidationError("unitary_distance is only defined for 2x2 unitaries");
  }
  detail::require_u2(u1);
  detail::require_u2(u2);
  return difficulty_u2(u2 * u1.adjoint()).value;
}

// ---------------------------------------------------------------------------
// Named gates

inline Matrix phase_gate(double theta) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, theta);
  return m;
}

inline Matrix hadamard_gate() {
  Matrix m(2, 2);
  m << 1.0, 1.0, 1.0, -1.0;
  return m / std::sqrt(2.0);
}

inline Matrix sqrt_not_gate() {
  Matrix m(2, 2);
  m << cplx(1, 1), cplx(1, -1), cplx(1, -1), cplx(1, 1);
  return m * 0.5;
}

struct GateRow {
  std::string name;
  double difficulty = 0.0;
};

/// Difficulties of the standard single-qubit gates plus ph(theta) for each
/// requested angle, each computed through bloch_decompose.
inline std::vector<GateRow> gate_table(const std::vector<double>& phase_angles) {
  std::vector<std::pair<std::string, Matrix>> gates{
      {"X", pauli_x()},          {"Y", pauli_y()}, {"Z", pauli_z()},
      {"sqrt-NOT", sqrt_not_gate()}, {"Hadamard", hadamard_gate()},
      {"S", phase_gate(kPi / 2.0)}, {"T", phase_gate(kPi / 4.0)},
  };
  std::vector<GateRow> rows;
  for (const auto& [name, u] : gates) rows.push_back({name, difficulty_u2(u).value});
  for (double th : phase_angles) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "ph(%.17g)", th);
    rows.push_back({buf, difficulty_u2(phase_gate(th)).value});
  }
  return rows;
}

/// Ten-point grid on (0, pi] used for the ph(theta) rows.
inline std::vector<double> default_phase_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 10; ++i) g.push_back(kPi * i / 10.0);
  return g;
}

// ---------------------------------------------------------------------------
// Comparison with the specific-state time bound for e^{i theta} X

struct LevitinComparison {
  double theta = 0.0;
  /// Effort of |0> under the unshifted Hamiltonian with spectrum {theta, theta + pi}.
  double specific_state_effort = 0.0;
  /// Effort of the top eigenstate after shifting the ground energy to zero.
  double worst_case_effort = 0.0;
};

/// Implements U = e^{i theta} X in unit time and measures both efforts by
/// evolving the states and integrating <H>.
inline LevitinComparison levitin_comparison(double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) throw ValidationError("theta must lie in [0, pi]");
  StateVector plus = StateVector::normalized((Vector(2) << 1.0, 1.0).finished());
  StateVector minus = StateVector::normalized((Vector(2) << 1.0, -1.0).finished());
  auto proj = [](const StateVector& v) -> Matrix { return v.amplitudes() * v.amplitudes().adjoint(); };
  // X|+> = |+>, X|-> = -|->, so e^{i theta} X has phases theta and theta + pi.
  Matrix h = theta * proj(plus) + (theta + kPi) * proj(minus);
  auto traj = HamiltonianTrajectory::constant(h);
  LevitinComparison out;
  out.theta = theta;
  out.specific_state_effort = effort_energy_integral(traj, StateVector::basis(2, 0), 1.0);

  auto es = spectral_decompose(h, SpectrumKind::hermitian);
  Matrix shifted = h - es.values(0).real() * identity(2);
  StateVector top = StateVector::normalized(es.vectors.col(1));
  out.worst_case_effort =
      effort_energy_integral(HamiltonianTrajectory::constant(shifted), top, 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Classical reversible circuits

struct CircuitGate {
  std::string gate;
  std::vector<int> wires;
};

/// Sum of per-gate difficulties: NOT, CNOT and CCNOT cost D+(C^k X) = pi each,
/// SWAP is priced as three CNOTs. Excludes any cost of sequencing the gates.
inline double classical_circuit_effort_bound(const std::vector<CircuitGate>& circuit) {
  static const std::map<std::string, int> arity{{"NOT", 1}, {"CNOT", 2}, {"CCNOT", 3}, {"SWAP", 2}};
  double total = 0.0;
  std::map<std::string, double> price;
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    const auto& g = circuit[i];
    auto it = arity.find(g.gate);
    if (it == arity.end()) {
      throw ValidationError("unknown gate '" + g.gate + "' at position " + std::to_string(i));
    }
    if (static_cast<int>(g.wires.size()) != it->second) {
      throw ValidationError(g.gate + " at position " + std::to_string(i) + " needs " +
                            std::to_string(it->second) + " wires");
    }
    for (std::size_t a = 0; a < g.wires.size(); ++a) {
      if (g.wires[a] < 0) throw ValidationError("wire indices must be nonnegative");
      for (std::size_t b = a + 1; b < g.wires.size(); ++b) {
        if (g.wires[a] == g.wires[b]) {
          throw ValidationError(g.gate + " at position " + std::to_string(i) + " repeats a wire");
        }
      }
    }
    if (!price.contains(g.gate)) {
      if (g.gate == "NOT") {
        price[g.gate] = difficulty_u2(pauli_x()).value;
      } else if (g.gate == "CNOT") {
        price[g.gate] = difficulty_controlled(pauli_x(), 1).value;
      } else if (g.gate == "CCNOT") {
        price[g.gate] = difficulty_controlled(pauli_x(), 2).value;
      } else {
        price[g.gate] = 3.0 * difficulty_controlled(pauli_x(), 1).value;
      }
    }
    total += price[g.gate];
  }
  return total;
}

/// Overwriting inverter as reversible steps: SWAP the old output into the
/// environment, advance the environment pointer (priced as one CNOT), CNOT.
inline std::vector<CircuitGate> inverter_plan() {
  return {{"SWAP", {1, 2}}, {"CNOT", {3, 4}}, {"CNOT", {0, 1}}};
}

// ---------------------------------------------------------------------------
// Optimality falsification

struct OptimalitySearch {
  double claimed = 0.0;
  double best_found = 0.0;
  int samples = 0;
};

/// Random search over constant unit-time Hamiltonians that implement U up to
/// global phase: random global phase and random 2 pi branch shifts of each
/// eigenphase, ground-shifted; reports the least worst-case effort seen.
inline OptimalitySearch optimality_search(const Matrix& u, int samples, std::uint64_t seed) {
  detail::require_u2(u);
  auto es = spectral_decompose(u, SpectrumKind::unitary);
  RealVector base = es.phases();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  std::uniform_int_distribution<int> branch(-2, 2);
  OptimalitySearch out;
  out.claimed = difficulty_u2(u).value;
  out.best_found = INFINITY;
  out.samples = samples;
  for (int s = 0; s < samples; ++s) {
    double g = phase(rng);
    RealVector ev(2);
    for (int i = 0; i < 2; ++i) ev(i) = base(i) + g + 2.0 * kPi * branch(rng);
    Matrix h = from_spectrum(es.vectors, ev);
    if (operator_fidelity(exp_i(hermitian_part(h)), u) < 1.0 - 1e-9) {
      throw NumericalError("optimality search produced a Hamiltonian that misses the target");
    }
    out.best_found = std::min(out.best_found, ev.maxCoeff() - ev.minCoeff());
  }
  return out;
}

}  // namespace qeffort

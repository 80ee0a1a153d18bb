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

// Effort of a state trajectory, computed along independent routes:
//
//   line integral     sum of arg<psi_k|psi_k+1> over the sampled path
//   energy integral   \int <psi(t)|H(t)|psi(t)> dt (composite Simpson)
//   swept area        signed complex-plane area traced by the coefficients
//                     in a fixed basis (twice the area is the effort)
//   action            <psi0|A(t)|psi0> from the tracked action operator
//
// Values are signed and convention-free; no ground-state shift is applied here.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qeffort/action.hpp"
#include "qeffort/error.hpp"
#include "qeffort/evolution.hpp"
#include "qeffort/linalg.hpp"

namespace qeffort {

/// Consecutive samples must overlap at least this much in magnitude.
inline constexpr double kDenseOverlap = 0.9;
inline constexpr double kIdentityChainTol = 1e-6;

namespace detail {

inline void require_dense(const std::vector<TimedState>& states) {
  if (states.size() < 2) throw ValidationError("effort needs at least two samples");
  for (std::size_t k = 0; k + 1 < states.size(); ++k) {
    if (states[k].state.dim() != states[k + 1].state.dim()) {
      throw ValidationError("state dimensions differ along the trajectory");
    }
    if (!(states[k + 1].time > states[k].time)) {
      throw ValidationError("sample times must be strictly increasing");
    }
    double ov = std::abs(states[k].state.inner(states[k + 1].state));
    if (ov <= kDenseOverlap) {
      throw ValidationError("sparse sampling: |<psi_k|psi_k+1>| = " + std::to_string(ov) +
                            " at sample " + std::to_string(k) + " (needs > 0.9)");
    }
  }
}

// Sums a per-step increment g(i, j) over the path with a Richardson
// correction. The per-step discretization error of an increment that is odd
// under path reversal is c h^3 to leading order; comparing two fine steps
// with the combined coarse step estimates c and removes it.
template <typename Increment>
double richardson_sum(const std::vector<TimedState>& s, Increment g) {
  const std::size_t steps = s.size() - 1;
  auto time = [&](std::size_t i) { return s[i].time; };
  auto c3 = [&](std::size_t k) {
    double h1 = time(k + 1) - time(k), h2 = time(k + 2) - time(k + 1);
    double d = g(k, k + 1) + g(k + 1, k + 2) - g(k, k + 2);
    return -d / (3.0 * h1 * h2 * (h1 + h2));
  };
  double total = 0.0;
  std::size_t k = 0;
  for (; k + 2 <= steps; k += 2) {
    double h1 = time(k + 1) - time(k), h2 = time(k + 2) - time(k + 1);
    total += g(k, k + 1) + g(k + 1, k + 2) - c3(k) * (h1 * h1 * h1 + h2 * h2 * h2);
  }
  if (k < steps) {
    double h = time(k + 1) - time(k);
    total += g(k, k + 1);
    if (steps >= 2) total -= c3(k - 1) * h * h * h;
  }
  return total;
}

}  // namespace detail

/// Effort as the discrete line integral of Im<psi|psi'>.
///
/// Uses arg<psi_k|psi_k+1> per step rather than Im<psi_k|psi_k+1>; the two
/// agree to third order per step, and arg is exact for a single channel
/// rotating at constant rate. A Richardson pass removes the h^3 term.
inline double effort_line_integral(const std::vector<TimedState>& states) {
  detail::require_dense(states);
  return detail::richardson_sum(states, [&](std::size_t i, std::size_t j) {
    return std::arg(states[i].state.inner(states[j].state));
  });
}

/// Composite Simpson integral of <H> over the trajectory's sample grid. Each
/// interval between breakpoints is integrated separately, using one-sided
/// values of a piecewise-constant H at its ends.
inline double energy_integral(const HamiltonianTrajectory& h, const UnitaryTrajectory& traj,
                              const StateVector& psi0) {
  if (psi0.dim() != h.dim() || traj.dim() != h.dim()) {
    throw ValidationError("dimension mismatch between Hamiltonian, trajectory and state");
  }
  using Side = HamiltonianTrajectory::Side;
  auto energy = [&](std::size_t k, Side side) {
    Vector psi = traj.unitaries[k] * psi0.amplitudes();
    return psi.dot(h.at(traj.times[k], side) * psi).real() / psi.squaredNorm();
  };
  double total = 0.0;
  for (std::size_t b = 0; b + 1 < traj.interval_bounds.size(); ++b) {
    std::size_t i0 = traj.interval_bounds[b], i1 = traj.interval_bounds[b + 1];
    double dt = (traj.times[i1] - traj.times[i0]) / static_cast<double>(i1 - i0);
    double s = energy(i0, Side::right) + energy(i1, Side::left);
    for (std::size_t k = i0 + 1; k < i1; ++k) {
      s += ((k - i0) % 2 == 1 ? 4.0 : 2.0) * energy(k, Side::right);
    }
    total += s * dt / 3.0;
  }
  return total;
}

inline double effort_energy_integral(const HamiltonianTrajectory& h, const StateVector& psi0,
                                     double t_end, const StepPolicy& policy) {
  return energy_integral(h, evolve(h, t_end, policy), psi0);
}

inline double effort_energy_integral(const HamiltonianTrajectory& h, const StateVector& psi0,
                                     double t_end) {
  return effort_energy_integral(h, psi0, t_end, default_step_policy(h));
}

struct AreaResult {
  /// Total signed area (sum over channels).
  double total = 0.0;
  /// Signed area swept by each basis coefficient.
  std::vector<double> per_channel;
};

/// Signed area swept by the coefficients c_j(t) = <b_j|psi(t)> on chords to
/// the origin; `basis` holds the basis vectors b_j as columns.
inline AreaResult area_swept_detail(const std::vector<TimedState>& states, const Matrix& basis) {
  require_unitary(basis, "basis", 1e-9);
  detail::require_dense(states);
  if (basis.rows() != states.front().state.dim()) {
    throw ValidationError("basis dimension does not match states");
  }
  std::vector<Vector> coeffs;
  coeffs.reserve(states.size());
  for (const auto& s : states) coeffs.push_back(basis.adjoint() * s.state.amplitudes());
  AreaResult out;
  out.per_channel.resize(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    out.per_channel[j] = detail::richardson_sum(states, [&](std::size_t a, std::size_t b) {
      return 0.5 * (std::conj(coeffs[a](j)) * coeffs[b](j)).imag();
    });
    out.total += out.per_channel[j];
  }
  return out;
}

inline double area_swept(const std::vector<TimedState>& states, const Matrix& basis) {
  return area_swept_detail(states, basis).total;
}

struct LabeledBasis {
  std::string label;
  Matrix vectors;
};

struct BasisArea {
  std::string label;
  double area = 0.0;
};

struct EffortReport {
  double alpha_line_integral = 0.0;
  double alpha_energy_integral = 0.0;
  double alpha_action_expectation = 0.0;
  /// Area in the first basis of the report.
  double area_swept = 0.0;
  std::string basis_used;
  std::vector<BasisArea> basis_areas;
  /// Largest |x - y| over {2 * area (every basis), line, energy, action}.
  double max_pairwise_discrepancy = 0.0;
  /// Same, restricted to the quantities computed from the state path alone
  /// (2 * area, line, energy).
  double state_path_discrepancy = 0.0;
  double tolerance = kIdentityChainTol;

  bool consistent() const { return max_pairwise_discrepancy < tolerance; }
};

namespace detail {
inline double max_spread(const std::vector<double>& xs) {
  auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return *hi - *lo;
}
}  // namespace detail

/// Runs every effort computation on one evolution and compares them.
/// An empty `bases` list uses the computational basis.
inline EffortReport effort_report(const HamiltonianTrajectory& h, const StateVector& psi0,
                                  double t_end, const std::vector<LabeledBasis>& bases,
                                  const StepPolicy& policy) {
  if (psi0.dim() != h.dim()) throw ValidationError("state dimension does not match Hamiltonian");
  UnitaryTrajectory traj = evolve(h, t_end, policy);
  auto states = state_trajectory(traj, psi0);

  EffortReport r;
  r.alpha_line_integral = effort_line_integral(states);
  r.alpha_energy_integral = energy_integral(h, traj, psi0);
  r.alpha_action_expectation = action_expectation(track_action(traj), psi0, traj.end_time());

  std::vector<LabeledBasis> used = bases;
  if (used.empty()) used.push_back({"computational", identity(h.dim())});
  std::vector<double> path{r.alpha_line_integral, r.alpha_energy_integral};
  for (const auto& b : used) {
    double a = area_swept(states, b.vectors);
    r.basis_areas.push_back({b.label, a});
    path.push_back(2.0 * a);
  }
  r.area_swept = r.basis_areas.front().area;
  r.basis_used = r.basis_areas.front().label;
  r.state_path_discrepancy = detail::max_spread(path);
  path.push_back(r.alpha_action_expectation);
  r.max_pairwise_discrepancy = detail::max_spread(path);
  return r;
}

inline EffortReport effort_report(const HamiltonianTrajectory& h, const StateVector& psi0,
                                  double t_end, const std::vector<LabeledBasis>& bases = {}) {
  return effort_report(h, psi0, t_end, bases, default_step_policy(h));
}

// ---------------------------------------------------------------------------
// Ensembles

struct WeightedState {
  StateVector state;
  double probability = 0.0;
};

/// Either an explicit list of weighted pure states or a density operator.
class StateEnsemble {
 public:
  static StateEnsemble from_states(std::vector<WeightedState> members) {
    if (members.empty()) throw ValidationError("ensemble must contain at least one state");
    double total = 0.0;
    for (const auto& m : members) {
      if (!(m.probability >= 0.0)) throw ValidationError("ensemble probabilities must be nonnegative");
      if (m.state.dim() != members.front().state.dim()) {
        throw ValidationError("ensemble states have different dimensions");
      }
      total += m.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ValidationError("ensemble probabilities sum to " + std::to_string(total) + ", not 1");
    }
    StateEnsemble e;
    e.members_ = std::move(members);
    Eigen::Index n = e.members_.front().state.dim();
    e.rho_ = Matrix::Zero(n, n);
    for (const auto& m : e.members_) {
      e.rho_ += m.probability * m.state.amplitudes() * m.state.amplitudes().adjoint();
    }
    return e;
  }

  static StateEnsemble from_density(const Matrix& rho) {
    require_hermitian(rho, "density operator");
    if (std::abs(rho.trace() - cplx(1.0, 0.0)) > 1e-10) {
      throw ValidationError("density operator must have unit trace");
    }
    auto es = spectral_decompose(rho, SpectrumKind::hermitian);
    if (es.values(0).real() < -1e-10) {
      throw ValidationError("density operator is not positive semidefinite");
    }
    StateEnsemble e;
    e.rho_ = hermitian_part(rho);
    for (Eigen::Index i = 0; i < es.dim(); ++i) {
      double p = es.values(i).real();
      if (p > 1e-12) e.members_.push_back({StateVector::normalized(es.vectors.col(i)), p});
    }
    return e;
  }

  const Matrix& density() const { return rho_; }
  const std::vector<WeightedState>& members() const { return members_; }
  Eigen::Index dim() const { return rho_.rows(); }

 private:
  Matrix rho_;
  std::vector<WeightedState> members_;
};

struct EffortBounds {
  double min = 0.0;
  double max = 0.0;
  double expected = 0.0;
};

/// Extremes and mean of <psi|A|psi> over the whole state space (uniform
/// ensemble I/dim).
inline EffortBounds effort_bounds(const ActionOperator& a) {
  auto es = spectral_decompose(a.matrix, SpectrumKind::hermitian);
  RealVector ev = es.real_values();
  return {ev.minCoeff(), ev.maxCoeff(), a.matrix.trace().real() / static_cast<double>(a.matrix.rows())};
}

/// Extremes over the ensemble's members and Tr(rho A).
inline EffortBounds effort_bounds(const ActionOperator& a, const StateEnsemble& ensemble) {
  require_hermitian(a.matrix, "action operator", 1e-9);
  if (ensemble.dim() != a.matrix.rows()) throw ValidationError("ensemble dimension mismatch");
  EffortBounds b{INFINITY, -INFINITY, (ensemble.density() * a.matrix).trace().real()};
  for (const auto& m : ensemble.members()) {
    double e = m.state.expectation(a.matrix);
    b.min = std::min(b.min, e);
    b.max = std::max(b.max, e);
  }
  return b;
}

/// arccos |<psi1|psi2>|, the least effort of any path between the two states.
inline double hilbert_distance(const StateVector& psi1, const StateVector& psi2) {
  if (psi1.dim() != psi2.dim()) throw ValidationError("state dimensions differ");
  double f = std::min(1.0, std::abs(psi1.inner(psi2)));
  return std::acos(f);
}

}  // namespace qeffort

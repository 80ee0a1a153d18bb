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

// Fidelity, infidelity and the least effort needed to reach a target
// infidelity; orthogonalization times under constant Hamiltonians.

#pragma once

#include <cmath>
#include <optional>

#include "qeffort/difficulty.hpp"
#include "qeffort/effort.hpp"
#include "qeffort/evolution.hpp"
#include "qeffort/linalg.hpp"

namespace qeffort {

/// F = |<u|v>|, clamped to [0, 1].
inline double fidelity(const StateVector& u, const StateVector& v) {
  if (u.dim() != v.dim()) throw ValidationError("state dimensions differ");
  return std::min(1.0, std::abs(u.inner(v)));
}

/// sqrt(1 - F^2), evaluated as sqrt((1 - F)(1 + F)) to keep precision near F = 1.
inline double infidelity(const StateVector& u, const StateVector& v) {
  double f = fidelity(u, v);
  return std::sqrt((1.0 - f) * (1.0 + f));
}

struct InfidelityRealization {
  Matrix hamiltonian;
  double duration = 1.0;
  StateVector initial_state = StateVector::basis(2, 0);
  StateVector final_state = StateVector::basis(2, 0);
  double measured_state_effort = 0.0;
  double measured_infidelity = 0.0;
};

struct InfidelityPlan {
  double target_infidelity = 0.0;
  double energy = 1.0;
  double rotation_angle = 0.0;
  double state_effort = 0.0;
  double worst_case_effort = 0.0;
  /// Least time when the state's mean energy above ground is `energy`.
  double min_time_at_state_energy = 0.0;
  /// Least time when the top of the spectrum sits `energy` above ground.
  double min_time_at_max_energy = 0.0;
  InfidelityRealization realization;
};

/// Least-effort route to infidelity I from state v (default |+>).
///
/// The rotation is about the axis perpendicular to v: in the basis where
/// v = (|0> + |1>)/sqrt 2 it is a z rotation by 2 arcsin I, implemented by
/// its optimal Hamiltonian over unit time and then evolved to measure the
/// effort actually spent by v.
inline InfidelityPlan plan_infidelity(double target, double energy,
                                      const std::optional<StateVector>& v = std::nullopt) {
  if (!(target >= 0.0 && target <= 1.0)) throw ValidationError("infidelity must lie in [0, 1]");
  if (!(energy > 0.0) || !std::isfinite(energy)) throw ValidationError("energy must be positive");
  InfidelityPlan p;
  p.target_infidelity = target;
  p.energy = energy;
  p.state_effort = std::asin(target);
  p.rotation_angle = 2.0 * p.state_effort;
  p.worst_case_effort = 2.0 * p.state_effort;
  p.min_time_at_state_energy = p.state_effort / energy;
  p.min_time_at_max_energy = p.worst_case_effort / energy;

  StateVector plus = StateVector::normalized((Vector(2) << 1.0, 1.0).finished());
  // Change of basis B with B|+> = v.
  Matrix b = identity(2);
  if (v) {
    if (v->dim() != 2) throw ValidationError("plan_infidelity works on two-level states");
    Matrix from(2, 2), to(2, 2);
    from.col(0) = plus.amplitudes();
    from.col(1) = (Vector(2) << 1.0, -1.0).finished() / std::sqrt(2.0);
    Vector w = v->amplitudes();
    to.col(0) = w;
    to.col(1) << -std::conj(w(1)), std::conj(w(0));
    b = to * from.adjoint();
  }
  Matrix h = b * optimal_hamiltonian(phase_gate(p.rotation_angle), 1.0) * b.adjoint();
  h = hermitian_part(h);

  auto& r = p.realization;
  r.hamiltonian = h;
  r.duration = 1.0;
  r.initial_state = v ? *v : plus;
  auto traj = HamiltonianTrajectory::constant(h);
  auto u = evolve(traj, 1.0);
  r.final_state = StateVector::normalized(u.unitaries.back() * r.initial_state.amplitudes());
  r.measured_state_effort = energy_integral(traj, u, r.initial_state);
  r.measured_infidelity = infidelity(r.initial_state, r.final_state);
  return p;
}

/// <psi|H|psi> minus the least eigenvalue of H.
inline double mean_energy_above_ground(const Matrix& h, const StateVector& psi) {
  auto es = spectral_decompose(h, SpectrumKind::hermitian);
  return psi.expectation(h) - es.values(0).real();
}

inline constexpr double kOrthogonalityTol = 1e-9;

/// First t in (0, t_max] with |<psi0|psi(t)>| < 1e-9 under a constant
/// Hamiltonian, or nullopt.
///
/// The overlap f(t) = sum_j p_j e^{i w_j t} is evaluated in the eigenbasis.
/// Local minima of |f|^2 are bracketed on a grid and refined by bisection on
/// d|f|^2/dt to 1e-10 time resolution.
inline std::optional<double> orthogonalization_time(const HamiltonianTrajectory& h,
                                                    const StateVector& psi0, double t_max) {
  if (h.kind() != HamiltonianTrajectory::Kind::constant) {
    throw ValidationError("orthogonalization_time needs a constant Hamiltonian");
  }
  if (!(t_max > 0.0)) throw ValidationError("t_max must be positive");
  if (psi0.dim() != h.dim()) throw ValidationError("state dimension does not match Hamiltonian");
  auto es = spectral_decompose(h.matrices().front(), SpectrumKind::hermitian);
  RealVector w = es.real_values();
  RealVector p = (es.vectors.adjoint() * psi0.amplitudes()).cwiseAbs2();
  double spread = w.maxCoeff() - w.minCoeff();
  if (spread <= 0.0) return std::nullopt;

  auto overlap = [&](double t) {
    cplx f = 0.0;
    for (Eigen::Index j = 0; j < w.size(); ++j) f += p(j) * std::polar(1.0, w(j) * t);
    return f;
  };
  auto slope = [&](double t) {  // d|f|^2/dt
    cplx f = 0.0, df = 0.0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      cplx e = p(j) * std::polar(1.0, w(j) * t);
      f += e;
      df += cplx(0.0, w(j)) * e;
    }
    return 2.0 * (std::conj(f) * df).real();
  };

  const double dt = std::min(t_max, kPi / (32.0 * spread));
  double a = 0.0, ga = slope(0.0);
  while (a < t_max) {
    double b = std::min(t_max, a + dt);
    double gb = slope(b);
    if (ga < 0.0 && gb >= 0.0) {
      double lo = a, hi = b;
      while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        if (slope(mid) < 0.0) lo = mid; else hi = mid;
      }
      double t = 0.5 * (lo + hi);
      if (std::abs(overlap(t)) < kOrthogonalityTol) return t;
    }
    a = b;
    ga = gb;
  }
  return std::nullopt;
}

/// Cyclic shift X_N |j> = |j+1 mod N>.
inline Matrix cyclic_shift(int n) {
  if (n < 2) throw ValidationError("cycle length must be at least 2");
  Matrix x = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) x((j + 1) % n, j) = 1.0;
  return x;
}

/// Ground-zero Hamiltonian generating X_N in unit time: Fourier modes
/// f_k carry energies 2 pi k / N, k = 0..N-1.
inline Matrix cycle_hamiltonian(int n) {
  Matrix vecs(n, n);
  RealVector energies(n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) vecs(j, k) = std::polar(1.0 / std::sqrt(double(n)), -2.0 * kPi * j * k / n);
    energies(k) = 2.0 * kPi * k / n;
  }
  return hermitian_part(from_spectrum(vecs, energies));
}

/// Effort spent by |0> over one transition of the N-cycle, measured by
/// evolving and integrating <H>.
inline double cycle_transition_effort(int n) {
  auto h = HamiltonianTrajectory::constant(cycle_hamiltonian(n));
  return effort_energy_integral(h, StateVector::basis(n, 0), 1.0);
}

}  // namespace qeffort

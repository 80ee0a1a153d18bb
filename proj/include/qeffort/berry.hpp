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

// Aharonov-Anandan residual for cyclic states of an evolution.
//
// For each eigenvector psi of U(tau) (a closed loop in projective space) the
// dynamical phase alpha = \int <psi(t)|H(t)|psi(t)> dt is compared with the
// eigenphase. A&A write U = e^{-iA}; with this library's U = e^{+iA} their
// phase is phi = -Arg(u), and beta = alpha + phi, folded to (-pi, pi]. A
// claim that beta vanishes mod 2 pi is tested, not assumed.

#pragma once

#include <cmath>
#include <vector>

#include "qeffort/effort.hpp"
#include "qeffort/evolution.hpp"
#include "qeffort/linalg.hpp"

namespace qeffort {

struct BerryChannel {
  int channel = 0;
  /// A&A phase of the eigenvalue: U psi = e^{-i phi} psi.
  double phi = 0.0;
  double alpha = 0.0;
  /// alpha + phi reduced to (-pi, pi].
  double beta_residual = 0.0;
  bool degenerate = false;
};

struct BerryCheckResult {
  double tau = 0.0;
  std::vector<BerryChannel> channels;

  double max_abs_residual() const {
    double m = 0.0;
    for (const auto& c : channels) m = std::max(m, std::abs(c.beta_residual));
    return m;
  }
};

inline BerryCheckResult aa_phase_check(const HamiltonianTrajectory& h, double tau,
                                       const StepPolicy& policy) {
  UnitaryTrajectory traj = evolve(h, tau, policy);
  auto es = spectral_decompose(traj.unitaries.back(), SpectrumKind::unitary);
  BerryCheckResult out;
  out.tau = tau;
  for (Eigen::Index i = 0; i < es.dim(); ++i) {
    BerryChannel c;
    c.channel = static_cast<int>(i);
    c.phi = -principal_arg(es.values(i));
    c.alpha = energy_integral(h, traj, StateVector::normalized(es.vectors.col(i)));
    c.beta_residual = wrap_angle(c.alpha + c.phi);
    c.degenerate = es.degenerate[i];
    out.channels.push_back(c);
  }
  return out;
}

inline BerryCheckResult aa_phase_check(const HamiltonianTrajectory& h, double tau) {
  return aa_phase_check(h, tau, default_step_policy(h));
}

}  // namespace qeffort

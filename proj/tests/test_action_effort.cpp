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

#include <gtest/gtest.h>

#include <vector>

#include "qeffort/qeffort.hpp"

namespace qeffort {
namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

StateVector plus_state() { return StateVector::normalized((Vector(2) << 1.0, 1.0).finished()); }

// ---------------------------------------------------------------------------
// assignment

TEST(Assignment, PicksMaximumWeight) {
  Eigen::MatrixXd w(3, 3);
  w << 0.1, 0.9, 0.0,
       0.8, 0.1, 0.1,
       0.1, 0.0, 0.9;
  auto a = max_weight_assignment(w);
  EXPECT_EQ(a, (std::vector<int>{1, 0, 2}));
  EXPECT_NEAR(assignment_weight(w, a), 2.6, 1e-15);
  EXPECT_NEAR(second_best_assignment_weight(w, a), 1.1, 1e-15);
}

// ---------------------------------------------------------------------------
// action-tracker

TEST(TrackAction, UnboundedEigenphaseDiag30) {
  auto track = track_action(evolve(HamiltonianTrajectory::constant(diag2(3.0, 0.0)), kPi));
  const auto& last = track.steps.back();
  EXPECT_NEAR(last.phases(0), 3.0 * kPi, 1e-8);
  EXPECT_EQ(last.windings[0], 1);
  EXPECT_NEAR(last.phases(1), 0.0, 1e-15);
  // The principal branch alone folds 3 pi back to pi.
  Matrix lg = principal_log_unitary(last.unitary);
  EXPECT_NEAR(lg(0, 0).real(), 3.0 * kPi - 2.0 * kPi, 1e-8);
}

TEST(TrackAction, Diag10) {
  auto track = track_action(evolve(HamiltonianTrajectory::constant(diag2(1.0, 0.0)), kPi));
  const auto& last = track.steps.back();
  EXPECT_NEAR(last.phases(0), kPi, 1e-8);
  EXPECT_NEAR(last.phases(1), 0.0, 1e-15);
  EXPECT_EQ(last.windings[0], 0);
  EXPECT_EQ(last.windings[1], 0);
}

TEST(TrackAction, PauliXCrossesBranchCut) {
  auto track = track_action(evolve(HamiltonianTrajectory::constant(pauli_x()), 2.0 * kPi));
  const auto& last = track.steps.back();
  std::vector<double> ph{last.phases(0), last.phases(1)};
  std::sort(ph.begin(), ph.end());
  EXPECT_NEAR(ph[0], -2.0 * kPi, 1e-8);
  EXPECT_NEAR(ph[1], 2.0 * kPi, 1e-8);
  for (std::size_t k = 1; k < track.size(); ++k) {
    for (int i = 0; i < 2; ++i) {
      EXPECT_LT(std::abs(track.steps[k].phases(i) - track.steps[k - 1].phases(i)), kPi / 2);
      EXPECT_LE(std::abs(track.steps[k].windings[i] - track.steps[k - 1].windings[i]), 1);
    }
  }
}

TEST(TrackAction, ActionAtExamples) {
  Random rng(31);
  Matrix h = rng.hermitian(3, 4.0);
  auto traj = evolve(HamiltonianTrajectory::constant(h), 2.5);
  auto track = track_action(traj);
  EXPECT_LT(action_at(track, 0.0).matrix.norm(), 1e-15);
  for (double t : {0.5, 1.0, 2.5}) {
    EXPECT_LT((action_at(track, t).matrix - h * t).norm(), 1e-8) << t;
  }
  EXPECT_THROW(action_at(track, 3.0), ValidationError);

  auto pw = HamiltonianTrajectory::piecewise({{1.0, pauli_x()}, {1.0, pauli_z()}});
  auto t2 = evolve(pw, 2.0);
  auto tr2 = track_action(t2);
  EXPECT_LT((exp_i(action_at(tr2, 2.0).matrix) - t2.unitaries.back()).norm(), 1e-8);
}

TEST(TrackAction, ReconstructionAndContinuityOnRandomTrajectories) {
  Random rng(32);
  for (int trial = 0; trial < 4; ++trial) {
    Eigen::Index n = trial % 2 ? 4 : 3;
    auto h = trial < 2 ? rng.piecewise(n, 3, 3.0, 2.0) : rng.interpolated(n, 6, 3.0, 2.0);
    auto traj = evolve(h, 3.0);
    auto track = track_action(traj);
    for (std::size_t k = 0; k < track.size(); ++k) {
      const auto& s = track.steps[k];
      Matrix a = action_at(track, s.time).matrix;
      EXPECT_LT(hermiticity_defect(a), 1e-9);
      EXPECT_LT((exp_i(hermitian_part(a)) - traj.unitaries[k]).norm(), 1e-8);
      if (k > 0) {
        for (Eigen::Index i = 0; i < n; ++i) {
          EXPECT_LT(std::abs(s.phases(i) - track.steps[k - 1].phases(i)), kPi / 2);
        }
      }
    }
  }
}

TEST(TrackAction, GroundChannelStaysAtZero) {
  Random rng(33);
  Matrix v = rng.unitary(3);
  RealVector e(3);
  e << 0.0, 1.7, 5.2;
  auto track = track_action(evolve(HamiltonianTrajectory::constant(hermitian_part(from_spectrum(v, e))), 4.0));
  for (const auto& s : track.steps) {
    Eigen::Index ground = 0;
    (s.vectors.adjoint() * v.col(0)).cwiseAbs().maxCoeff(&ground);
    EXPECT_NEAR(s.phases(ground), 0.0, 1e-9);
  }
}

TEST(TrackAction, DegenerateSpectrumTracksMultiset) {
  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = 2.0;
  h(1, 1) = 2.0;
  auto traj = evolve(HamiltonianTrajectory::constant(h), 4.0);
  auto track = track_action(traj);
  std::vector<double> ph(track.steps.back().phases.data(), track.steps.back().phases.data() + 3);
  std::sort(ph.begin(), ph.end());
  EXPECT_NEAR(ph[0], 0.0, 1e-8);
  EXPECT_NEAR(ph[1], 8.0, 1e-8);
  EXPECT_NEAR(ph[2], 8.0, 1e-8);
  EXPECT_LT((action_at(track, 4.0).matrix - 4.0 * h).norm(), 1e-8);
}

TEST(TrackAction, CoarseSamplingIsRejected) {
  UnitaryTrajectory traj;
  traj.times = {0.0, 1.0};
  traj.unitaries = {identity(2), exp_i(diag2(2.0, 0.0))};
  traj.interval_bounds = {0, 1};
  EXPECT_THROW(track_action(traj), NumericalError);
}

TEST(ActionDerivative, Examples) {
  Random rng(34);
  Matrix h = rng.hermitian(3, 2.0);
  auto ch = HamiltonianTrajectory::constant(h);
  auto track = track_action(evolve(ch, 2.0));
  EXPECT_LT((action_derivative(track, ch, 0.0) - h).norm(), 1e-15);
  EXPECT_LT((action_derivative(track, ch, 1.5) - h).norm(), 1e-10);
}

TEST(ActionExpectation, Examples) {
  auto h = HamiltonianTrajectory::constant(diag2(1.0, 0.0));
  auto track = track_action(evolve(h, kPi));
  EXPECT_NEAR(action_expectation(track, plus_state(), kPi), kPi / 2, 1e-8);
  Random rng(35);
  Matrix hh = rng.hermitian(4, 1.5);
  auto es = spectral_decompose(hh, SpectrumKind::hermitian);
  auto tr = track_action(evolve(HamiltonianTrajectory::constant(hh), 2.0));
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(action_expectation(tr, StateVector::normalized(es.vectors.col(i)), 2.0),
                2.0 * es.values(i).real(), 1e-8);
  }
}

// ---------------------------------------------------------------------------
// effort

TEST(Effort, Fig1Report) {
  Matrix b01(2, 2);
  b01 << 1.0, -1.0, 1.0, 1.0;
  b01 /= std::sqrt(2.0);
  auto r = effort_report(HamiltonianTrajectory::constant(diag2(1.0, 0.0)), plus_state(), kPi,
                         {{"GE", identity(2)}, {"01", b01}});
  EXPECT_NEAR(r.alpha_line_integral, kPi / 2, 1e-6);
  EXPECT_NEAR(r.alpha_energy_integral, kPi / 2, 1e-6);
  EXPECT_NEAR(r.alpha_action_expectation, kPi / 2, 1e-6);
  EXPECT_NEAR(r.area_swept, kPi / 4, 1e-6);
  ASSERT_EQ(r.basis_areas.size(), 2u);
  EXPECT_NEAR(r.basis_areas[1].area, kPi / 4, 1e-6);
  EXPECT_LT(r.max_pairwise_discrepancy, 1e-6);
  EXPECT_TRUE(r.consistent());
  EXPECT_EQ(r.basis_used, "GE");
}

TEST(Effort, NullGenerator) {
  auto h = HamiltonianTrajectory::constant(Matrix::Zero(3, 3));
  auto psi = Random(41).state(3);
  auto r = effort_report(h, psi, 1.0);
  EXPECT_NEAR(r.alpha_line_integral, 0.0, 1e-15);
  EXPECT_NEAR(r.alpha_energy_integral, 0.0, 1e-15);
  EXPECT_NEAR(r.alpha_action_expectation, 0.0, 1e-15);
  EXPECT_NEAR(r.area_swept, 0.0, 1e-15);
  EXPECT_NEAR(effort_energy_integral(h, psi, 1.0), 0.0, 1e-15);
}

TEST(Effort, ConstantHamiltonianClosedForm) {
  Random rng(42);
  for (int n : {2, 4, 8}) {
    Matrix h = rng.hermitian(n, 2.0);
    auto psi = rng.state(n);
    auto traj = evolve(HamiltonianTrajectory::constant(h), 1.7);
    double expected = psi.expectation(h) * 1.7;
    EXPECT_NEAR(effort_line_integral(state_trajectory(traj, psi)), expected, 1e-6);
    EXPECT_NEAR(effort_energy_integral(HamiltonianTrajectory::constant(h), psi, 1.7), expected, 1e-6);
  }
}

TEST(Effort, EigenstateEnergyIntegral) {
  Random rng(43);
  Matrix h = rng.hermitian(3, 2.0);
  auto es = spectral_decompose(h, SpectrumKind::hermitian);
  EXPECT_NEAR(effort_energy_integral(HamiltonianTrajectory::constant(h), StateVector::normalized(es.vectors.col(2)), 1.3),
              es.values(2).real() * 1.3, 1e-10);
}

TEST(Effort, SparseSamplingRejected) {
  std::vector<TimedState> states{{0.0, StateVector::basis(2, 0)}, {1.0, StateVector::basis(2, 1)}};
  EXPECT_THROW(effort_line_integral(states), ValidationError);
  std::vector<TimedState> one{{0.0, StateVector::basis(2, 0)}};
  EXPECT_THROW(effort_line_integral(one), ValidationError);
}

TEST(Effort, NonUnitaryBasisRejected) {
  auto traj = evolve(HamiltonianTrajectory::constant(pauli_x()), 1.0);
  auto states = state_trajectory(traj, plus_state());
  EXPECT_THROW(area_swept(states, 2.0 * identity(2)), ValidationError);
}

TEST(Effort, SignedAreaIsNegativeForClockwiseRotation) {
  auto traj = evolve(HamiltonianTrajectory::constant(diag2(-1.0, 0.0)), kPi);
  EXPECT_NEAR(area_swept(state_trajectory(traj, plus_state()), identity(2)), -kPi / 4, 1e-6);
}

TEST(Effort, RandomTimeDependentStatePathIdentities) {
  Random rng(44);
  for (int trial = 0; trial < 3; ++trial) {
    auto h = rng.interpolated(4, 5, 2.0, 1.5);
    auto psi = rng.state(4);
    auto r = effort_report(h, psi, 2.0, {{"random", rng.unitary(4)}});
    // 2a, line integral and the energy integral are all functionals of the
    // state path and agree.
    EXPECT_LT(r.state_path_discrepancy, 1e-6);
  }
}

TEST(Effort, BasisIndependence) {
  Random rng(45);
  auto h = rng.piecewise(4, 3, 2.0, 1.5);
  auto states = state_trajectory(evolve(h, 2.0), rng.state(4));
  double ref = area_swept(states, identity(4));
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(area_swept(states, rng.unitary(4)), ref, 1e-8);
}

TEST(Effort, Additivity) {
  Random rng(46);
  Matrix h1 = rng.hermitian(3, 1.5), h2 = rng.hermitian(3, 1.5);
  const double t1 = 0.8, t2 = 1.6;
  auto psi = rng.state(3);
  auto whole = evolve(HamiltonianTrajectory::piecewise({{t1, h1}, {t2 - t1, h2}}), t2);
  auto states = state_trajectory(whole, psi);
  std::size_t cut = whole.index_of(t1);
  std::vector<TimedState> a(states.begin(), states.begin() + cut + 1), b(states.begin() + cut, states.end());
  EXPECT_NEAR(effort_line_integral(a) + effort_line_integral(b), effort_line_integral(states), 1e-8);
}

TEST(Effort, ReparameterizationInvariance) {
  Random rng(47);
  Matrix h = rng.hermitian(3, 1.0);
  auto psi = rng.state(3);
  auto slow = state_trajectory(evolve(HamiltonianTrajectory::constant(h), 2.0), psi);
  auto fast = state_trajectory(evolve(HamiltonianTrajectory::constant(2.0 * h), 1.0), psi);
  EXPECT_NEAR(effort_line_integral(slow), effort_line_integral(fast), 1e-8);
}

TEST(EffortBounds, Examples) {
  ActionOperator a{diag2(kPi, 0.0), 1.0};
  auto b = effort_bounds(a);
  EXPECT_NEAR(b.min, 0.0, 1e-15);
  EXPECT_NEAR(b.max, kPi, 1e-15);
  EXPECT_NEAR(b.expected, kPi / 2, 1e-15);
  auto z = effort_bounds(ActionOperator{Matrix::Zero(3, 3), 1.0});
  EXPECT_EQ(z.min, 0.0);
  EXPECT_EQ(z.max, 0.0);
  EXPECT_EQ(z.expected, 0.0);

  Random rng(48);
  Matrix m = rng.hermitian(5, 3.0);
  auto es = spectral_decompose(m, SpectrumKind::hermitian);
  std::vector<WeightedState> members;
  for (int i = 0; i < 5; ++i) members.push_back({StateVector::normalized(es.vectors.col(i)), 0.2});
  auto eb = effort_bounds(ActionOperator{m, 1.0}, StateEnsemble::from_states(members));
  EXPECT_NEAR(eb.expected, m.trace().real() / 5.0, 1e-10);
  EXPECT_NEAR(eb.min, es.values(0).real(), 1e-10);
  EXPECT_NEAR(eb.max, es.values(4).real(), 1e-10);
}

TEST(EffortBounds, EnsembleValidation) {
  EXPECT_THROW(StateEnsemble::from_states({{StateVector::basis(2, 0), 0.7}}), ValidationError);
  EXPECT_THROW(StateEnsemble::from_states({{StateVector::basis(2, 0), -0.5}, {StateVector::basis(2, 1), 1.5}}),
               ValidationError);
  EXPECT_THROW(StateEnsemble::from_density(2.0 * identity(2)), ValidationError);
  EXPECT_THROW(StateEnsemble::from_density(diag2(1.5, -0.5)), ValidationError);
  auto rho = StateEnsemble::from_density(diag2(0.25, 0.75));
  auto b = effort_bounds(ActionOperator{diag2(kPi, 0.0), 1.0}, rho);
  EXPECT_NEAR(b.expected, kPi / 4, 1e-12);
}

TEST(HilbertDistance, Examples) {
  auto a = StateVector::basis(2, 0);
  EXPECT_NEAR(hilbert_distance(a, a), 0.0, 1e-15);
  EXPECT_NEAR(hilbert_distance(a, StateVector::basis(2, 1)), kPi / 2, 1e-15);
  EXPECT_NEAR(hilbert_distance(a, plus_state()), kPi / 4, 1e-12);
}

TEST(HilbertDistance, MetricProperties) {
  Random rng(49);
  for (int i = 0; i < 1000; ++i) {
    auto a = rng.state(3), b = rng.state(3), c = rng.state(3);
    EXPECT_EQ(hilbert_distance(a, b), hilbert_distance(b, a));
    EXPECT_LE(hilbert_distance(a, c), hilbert_distance(a, b) + hilbert_distance(b, c) + 1e-12);
    EXPECT_NEAR(hilbert_distance(a, b), std::asin(infidelity(a, b)), 1e-12);
  }
}

}  // namespace
}  // namespace qeffort

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

// Continuous cumulative action A(t) = -i ln U(t) with A(0) = 0.
//
// The logarithm is made single-valued by following each eigenchannel of U(t)
// through time: eigenvectors are paired across steps by optimal overlap
// assignment and each eigenphase is unwound by the multiple of 2 pi that
// keeps it continuous. The resulting phases are unbounded, so A(t) = H t
// holds for constant H even when H t exceeds pi.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "qeffort/assignment.hpp"
#include "qeffort/error.hpp"
#include "qeffort/evolution.hpp"
#include "qeffort/linalg.hpp"

namespace qeffort {

struct ActionStep {
  double time = 0.0;
  Matrix unitary;
  /// Column i is the eigenvector of channel i; channel identity persists across steps.
  Matrix vectors;
  /// Continuous eigenphases alpha_i = Arg(u_i) + 2 pi n_i.
  RealVector phases;
  std::vector<int> windings;
  std::vector<bool> degenerate;
};

struct ActionTrack {
  std::vector<ActionStep> steps;

  Eigen::Index dim() const { return steps.front().phases.size(); }
  std::size_t size() const { return steps.size(); }

  std::size_t index_of(double t, double tol = 1e-9) const {
    if (steps.empty() || t < steps.front().time - tol || t > steps.back().time + tol) {
      throw ValidationError("time " + std::to_string(t) + " outside action track range");
    }
    auto it = std::lower_bound(steps.begin(), steps.end(), t - tol,
                               [](const ActionStep& s, double v) { return s.time < v; });
    if (it == steps.end() || std::abs(it->time - t) > tol) {
      throw ValidationError("time " + std::to_string(t) + " is not a sample time of the action track");
    }
    return static_cast<std::size_t>(it - steps.begin());
  }
};

struct ActionOperator {
  Matrix matrix;
  double time = 0.0;
};

struct TrackOptions {
  /// Largest eigenphase change accepted between consecutive samples.
  double unwind_limit = kPi / 2.0;
  /// Two channel assignments whose total squared overlaps differ by less than
  /// this are considered indistinguishable.
  double ambiguity_tol = 1e-6;
};

namespace detail {

inline Matrix polar_factor(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Groups indices whose keys lie within tol of a neighbour (keys compared by `dist`).
template <typename Dist>
std::vector<std::vector<Eigen::Index>> group_close(Eigen::Index n, Dist dist, double tol) {
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (dist(i, j) < tol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<Eigen::Index>> groups(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<Eigen::Index>> out;
  for (auto& g : groups) {
    if (g.size() > 1) out.push_back(std::move(g));
  }
  return out;
}

inline Matrix gather(const Matrix& m, const std::vector<Eigen::Index>& cols) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = m.col(cols[c]);
  return out;
}

inline void scatter(Matrix& m, const std::vector<Eigen::Index>& cols, const Matrix& block) {
  for (std::size_t c = 0; c < cols.size(); ++c) m.col(cols[c]) = block.col(static_cast<Eigen::Index>(c));
}

// Rotates the columns `cols` of `target` inside their span so they line up
// with the `cols.size()` columns of `reference` that project most strongly
// onto that span. Each rotated column keeps the slot of the original column
// it overlaps most, so channel labels survive the change of gauge.
inline void align_subspace(Matrix& target, const std::vector<Eigen::Index>& cols,
                           const Matrix& reference) {
  Matrix block = gather(target, cols);
  Eigen::VectorXd weight = (block.adjoint() * reference).cwiseAbs2().colwise().sum().transpose();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(reference.cols()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return weight(a) > weight(b); });
  order.resize(cols.size());
  Matrix ref = gather(reference, order);
  Matrix aligned = block * polar_factor(block.adjoint() * ref);
  std::vector<int> slot = max_weight_assignment((block.adjoint() * aligned).cwiseAbs2());
  Matrix permuted(block.rows(), block.cols());
  for (std::size_t c = 0; c < slot.size(); ++c) {
    permuted.col(static_cast<Eigen::Index>(c)) = aligned.col(slot[c]);
  }
  scatter(target, cols, permuted);
}

}  // namespace detail

/// Builds the continuous eigenphase record of a unitary trajectory.
///
/// Within a degenerate eigenspace of U only the multiset of eigenphases is
/// meaningful; the eigenvectors there are chosen to stay as close as possible
/// to their predecessors.
inline ActionTrack track_action(const UnitaryTrajectory& traj, const TrackOptions& options = {}) {
  if (traj.size() == 0) throw ValidationError("empty unitary trajectory");
  const Eigen::Index n = traj.dim();
  if ((traj.unitaries.front() - identity(n)).norm() > 1e-12) {
    throw ValidationError("unitary trajectory must start at the identity");
  }

  ActionTrack track;
  track.steps.reserve(traj.size());
  {
    ActionStep s0;
    s0.time = traj.times.front();
    s0.unitary = traj.unitaries.front();
    s0.vectors = identity(n);
    s0.phases = RealVector::Zero(n);
    s0.windings.assign(static_cast<std::size_t>(n), 0);
    s0.degenerate.assign(static_cast<std::size_t>(n), n > 1);
    track.steps.push_back(std::move(s0));
  }

  for (std::size_t k = 1; k < traj.size(); ++k) {
    const ActionStep& prev = track.steps.back();
    const Matrix& u = traj.unitaries[k];
    EigenSystem es = spectral_decompose(u, SpectrumKind::unitary);
    Matrix next_vecs = es.vectors;
    Matrix prev_vecs = prev.vectors;

    // Channels that share a tracked phase are interchangeable: re-gauge them
    // toward the new eigenbasis.
    auto prev_groups = detail::group_close(
        n, [&](Eigen::Index i, Eigen::Index j) { return std::abs(prev.phases(i) - prev.phases(j)); },
        kDegeneracyTol);
    for (const auto& g : prev_groups) detail::align_subspace(prev_vecs, g, next_vecs);

    // Degenerate eigenspaces of U(t_k): pick the basis closest to the previous vectors.
    auto next_groups = detail::group_close(
        n, [&](Eigen::Index i, Eigen::Index j) { return std::abs(es.values(i) - es.values(j)); },
        kDegeneracyTol);
    for (const auto& g : next_groups) detail::align_subspace(next_vecs, g, prev_vecs);

    Eigen::MatrixXd overlap = (prev_vecs.adjoint() * next_vecs).cwiseAbs2();
    std::vector<int> match = max_weight_assignment(overlap);
    if (match.empty()) throw NumericalError("eigenvector assignment failed");

    double worst = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) worst = std::min(worst, overlap(i, match[i]));
    // Any other assignment changes at least two rows, each losing at least
    // 2 * worst - 1; only near-ties need the explicit second-best search.
    if (n > 1 && 2.0 * (2.0 * worst - 1.0) <= options.ambiguity_tol) {
      double best = assignment_weight(overlap, match);
      double second = second_best_assignment_weight(overlap, match);
      if (best - second < options.ambiguity_tol) {
        std::ostringstream os;
        os << "ambiguous eigenvector matching at step " << k << " (t = " << traj.times[k]
           << "): best and second-best assignments differ by " << (best - second)
           << "; re-evolve with a smaller max_step";
        throw NumericalError(os.str());
      }
    }

    ActionStep s;
    s.time = traj.times[k];
    s.unitary = u;
    s.vectors.resize(n, n);
    s.phases.resize(n);
    s.windings.resize(static_cast<std::size_t>(n));
    s.degenerate.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index j = match[i];
      Vector v = next_vecs.col(j);
      cplx ov = prev_vecs.col(i).dot(v);
      if (std::abs(ov) > 0.0) v *= std::conj(ov) / std::abs(ov);
      s.vectors.col(i) = v;
      double arg = principal_arg(es.values(j));
      double delta = wrap_angle(arg - prev.phases(i));
      if (std::abs(delta) >= options.unwind_limit) {
        std::ostringstream os;
        os << "eigenphase of channel " << i << " jumped by " << delta << " rad at step " << k
           << " (t = " << traj.times[k] << "); re-evolve with a smaller max_step";
        throw NumericalError(os.str());
      }
      s.phases(i) = prev.phases(i) + delta;
      s.windings[i] = static_cast<int>(std::lround((s.phases(i) - arg) / (2.0 * kPi)));
      s.degenerate[i] = es.degenerate[j];
    }
    track.steps.push_back(std::move(s));
  }
  return track;
}

/// A(t) = sum_i alpha_i(t) |u_i(t)><u_i(t)| at a sample time.
inline ActionOperator action_at(const ActionTrack& track, double t) {
  const ActionStep& s = track.steps[track.index_of(t)];
  return {hermitian_part(from_spectrum(s.vectors, s.phases)), s.time};
}

/// <psi0|A(t)|psi0>, the accumulated mean phase angle predicted by A(t).
inline double action_expectation(const ActionTrack& track, const StateVector& psi0, double t) {
  const ActionStep& s = track.steps[track.index_of(t)];
  if (psi0.dim() != track.dim()) throw ValidationError("state dimension does not match track");
  RealVector w = (s.vectors.adjoint() * psi0.amplitudes()).cwiseAbs2();
  return w.dot(s.phases);
}

/// U^dagger(t) H(t) U(t).
inline Matrix action_derivative(const ActionTrack& track, const HamiltonianTrajectory& h, double t) {
  const ActionStep& s = track.steps[track.index_of(t)];
  if (h.dim() != track.dim()) throw ValidationError("Hamiltonian dimension does not match track");
  return hermitian_part(s.unitary.adjoint() * h.at(s.time) * s.unitary);
}

/// (A(t + dt) - A(t - dt)) / 2dt; both t +/- dt must be sample times.
inline Matrix action_central_difference(const ActionTrack& track, double t, double dt) {
  return (action_at(track, t + dt).matrix - action_at(track, t - dt).matrix) / (2.0 * dt);
}

}  // namespace qeffort

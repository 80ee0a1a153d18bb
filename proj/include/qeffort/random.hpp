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

// Seeded random states, Hermitian matrices, unitaries and trajectories.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qeffort/evolution.hpp"
#include "qeffort/linalg.hpp"

namespace qeffort {

class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return normal_(gen_); }
  cplx complex_normal() { return {normal(), normal()}; }

  Vector gaussian_vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  /// Haar-random pure state.
  StateVector state(Eigen::Index n) { return StateVector::normalized(gaussian_vector(n)); }

  /// GUE-like Hermitian matrix scaled to spectral norm `scale`.
  Matrix hermitian(Eigen::Index n, double scale = 1.0) {
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) g.col(i) = gaussian_vector(n);
    Matrix h = hermitian_part(g);
    double nrm = spectral_norm_hermitian(h);
    return nrm > 0.0 ? Matrix(h * (scale / nrm)) : h;
  }

  /// Haar-random unitary (QR of a Ginibre matrix with phase fix).
  Matrix unitary(Eigen::Index n) {
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) g.col(i) = gaussian_vector(n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
      cplx d = r(i, i);
      q.col(i) *= std::abs(d) > 0.0 ? d / std::abs(d) : cplx(1.0);
    }
    return q;
  }

  /// Piecewise-constant trajectory with `segments` pieces over [0, t_end].
  HamiltonianTrajectory piecewise(Eigen::Index n, int segments, double t_end, double scale = 1.0) {
    std::vector<PiecewiseSegment> segs;
    for (int s = 0; s < segments; ++s) segs.push_back({t_end / segments, hermitian(n, scale)});
    return HamiltonianTrajectory::piecewise(segs);
  }

  /// Linearly interpolated trajectory with `knots` samples over [0, t_end].
  HamiltonianTrajectory interpolated(Eigen::Index n, int knots, double t_end, double scale = 1.0) {
    std::vector<InterpolationSample> samples;
    for (int k = 0; k < knots; ++k) samples.push_back({t_end * k / (knots - 1), hermitian(n, scale)});
    return HamiltonianTrajectory::interpolated(samples);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace qeffort

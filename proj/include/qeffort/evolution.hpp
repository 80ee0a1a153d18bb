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

// Cumulative evolution operators U(t) for constant, piecewise-constant and
// linearly interpolated Hamiltonians. Units: hbar = 1, energies in radians
// per unit time, U(t) = T exp(+i \int H).

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qeffort/error.hpp"
#include "qeffort/linalg.hpp"

namespace qeffort {

struct PiecewiseSegment {
  double duration = 0.0;
  Matrix hamiltonian;
};

struct InterpolationSample {
  double time = 0.0;
  Matrix hamiltonian;
};

/// Time-parameterized Hermitian generator H(t).
class HamiltonianTrajectory {
 public:
  enum class Kind { constant, piecewise, interpolated };

  static HamiltonianTrajectory constant(Matrix h) {
    require_hermitian(h, "Hamiltonian");
    HamiltonianTrajectory out;
    out.kind_ = Kind::constant;
    out.dim_ = h.rows();
    out.knots_ = {0.0};
    out.matrices_ = {hermitian_part(h)};
    return out;
  }

  static HamiltonianTrajectory piecewise(const std::vector<PiecewiseSegment>& segments) {
    if (segments.empty()) throw ValidationError("piecewise Hamiltonian needs at least one segment");
    HamiltonianTrajectory out;
    out.kind_ = Kind::piecewise;
    out.dim_ = segments.front().hamiltonian.rows();
    double t = 0.0;
    out.knots_.push_back(t);
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const auto& s = segments[i];
      std::string what = "segment " + std::to_string(i) + " Hamiltonian";
      require_hermitian(s.hamiltonian, what.c_str());
      if (s.hamiltonian.rows() != out.dim_) {
        throw ValidationError(what + " has dimension " + std::to_string(s.hamiltonian.rows()) +
                              ", expected " + std::to_string(out.dim_));
      }
      if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
        throw ValidationError("segment " + std::to_string(i) + " duration must be positive");
      }
      t += s.duration;
      out.knots_.push_back(t);
      out.matrices_.push_back(hermitian_part(s.hamiltonian));
    }
    return out;
  }

  static HamiltonianTrajectory interpolated(const std::vector<InterpolationSample>& samples) {
    if (samples.size() < 2) {
      throw ValidationError("interpolated Hamiltonian needs at least two samples");
    }
    HamiltonianTrajectory out;
    out.kind_ = Kind::interpolated;
    out.dim_ = samples.front().hamiltonian.rows();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      std::string what = "sample " + std::to_string(i) + " Hamiltonian";
      require_hermitian(s.hamiltonian, what.c_str());
      if (s.hamiltonian.rows() != out.dim_) {
        throw ValidationError(what + " has dimension " + std::to_string(s.hamiltonian.rows()) +
                              ", expected " + std::to_string(out.dim_));
      }
      if (!std::isfinite(s.time)) throw ValidationError("sample time must be finite");
      if (i > 0 && !(s.time > samples[i - 1].time)) {
        throw ValidationError("interpolation sample times must be strictly increasing (sample " +
                              std::to_string(i) + ")");
      }
      out.knots_.push_back(s.time);
      out.matrices_.push_back(hermitian_part(s.hamiltonian));
    }
    return out;
  }

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }

  /// Piecewise: segment start times plus the final end time. Interpolated:
  /// sample times. Constant: {0}.
  const std::vector<double>& knots() const { return knots_; }
  /// Segment / sample Hamiltonians, aligned with knots().
  const std::vector<Matrix>& matrices() const { return matrices_; }

  double domain_begin() const { return kind_ == Kind::constant ? -INFINITY : knots_.front(); }
  double domain_end() const { return kind_ == Kind::constant ? INFINITY : knots_.back(); }

  enum class Side { right, left };

  /// H(t). Piecewise trajectories are right-continuous by default, with the
  /// final segment also covering its end point; Side::left asks for the
  /// left limit at a segment boundary.
  Matrix at(double t, Side side = Side::right) const {
    if (kind_ == Kind::constant) return matrices_.front();
    constexpr double slack = 1e-12;
    if (t < knots_.front() - slack || t > knots_.back() + slack) {
      throw ValidationError("Hamiltonian queried at t = " + std::to_string(t) +
                            " outside its domain [" + std::to_string(knots_.front()) + ", " +
                            std::to_string(knots_.back()) + "]");
    }
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t k = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    if (kind_ == Kind::piecewise) {
      if (side == Side::left && k > 0 && t == knots_[k]) --k;
      return matrices_[std::min(k, matrices_.size() - 1)];
    }
    if (k + 1 >= knots_.size()) return matrices_.back();
    double w = (t - knots_[k]) / (knots_[k + 1] - knots_[k]);
    w = std::clamp(w, 0.0, 1.0);
    return matrices_[k] * (1.0 - w) + matrices_[k + 1] * w;
  }

  /// Times strictly inside (t0, t1) where H(t) is not smooth.
  std::vector<double> breakpoints(double t0, double t1) const {
    std::vector<double> out;
    if (kind_ == Kind::constant) return out;
    for (double k : knots_) {
      if (k > t0 && k < t1) out.push_back(k);
    }
    return out;
  }

  /// max_t |H(t)|_2 over the domain (exact for linear interpolation by convexity).
  double max_spectral_norm() const {
    double m = 0.0;
    for (const auto& h : matrices_) m = std::max(m, spectral_norm_hermitian(h));
    return m;
  }

 private:
  Kind kind_ = Kind::constant;
  Eigen::Index dim_ = 0;
  std::vector<double> knots_;
  std::vector<Matrix> matrices_;
};

enum class StepRule {
  /// U <- exp_i(H(t + dt/2) dt) U. Second order.
  midpoint,
  /// Two-point Gauss-Legendre Magnus step with the commutator correction. Fourth order.
  magnus4,
};

struct StepPolicy {
  double max_step = 0.01;
  /// Unitarity defect that triggers an out-of-schedule re-unitarization.
  double tolerance = 1e-10;
  int reunitarize_every = 100;
  StepRule rule = StepRule::magnus4;

  void validate() const {
    if (!(max_step > 0.0) || !(tolerance > 0.0) || reunitarize_every <= 0) {
      throw ValidationError("step policy fields must all be positive");
    }
  }
};

/// max_step = min(0.01, pi / (8 |H|_max)); keeps each step's eigenphase
/// motion at most pi/8.
inline StepPolicy default_step_policy(const HamiltonianTrajectory& h) {
  StepPolicy p;
  double norm = h.max_spectral_norm();
  if (norm > 0.0) p.max_step = std::min(0.01, kPi / (8.0 * norm));
  return p;
}

struct UnitaryTrajectory {
  std::vector<double> times;
  std::vector<Matrix> unitaries;
  /// Indices into times of the interval boundaries (0, breakpoints of H,
  /// requested extra times, end). Each interval holds an even number of equal steps.
  std::vector<std::size_t> interval_bounds;
  /// Policy actually used (max_step after the eigenphase-motion cap).
  StepPolicy policy;

  Eigen::Index dim() const { return unitaries.front().rows(); }
  std::size_t size() const { return times.size(); }
  double end_time() const { return times.back(); }

  /// Index of the sample at t (within 1e-9), or nullopt.
  std::optional<std::size_t> find(double t, double tol = 1e-9) const {
    auto it = std::lower_bound(times.begin(), times.end(), t - tol);
    if (it != times.end() && std::abs(*it - t) <= tol) {
      return static_cast<std::size_t>(it - times.begin());
    }
    return std::nullopt;
  }

  std::size_t index_of(double t) const {
    if (times.empty() || t < times.front() - 1e-9 || t > times.back() + 1e-9) {
      throw ValidationError("time " + std::to_string(t) + " outside trajectory range [" +
                            std::to_string(times.front()) + ", " + std::to_string(times.back()) +
                            "]");
    }
    auto k = find(t);
    if (!k) {
      throw ValidationError("time " + std::to_string(t) +
                            " is not a sample time of the trajectory; request it via extra sample times");
    }
    return *k;
  }

  const Matrix& at(double t) const { return unitaries[index_of(t)]; }
};

namespace detail {

inline Matrix step_generator(const HamiltonianTrajectory& h, double t, double dt, StepRule rule) {
  if (rule == StepRule::midpoint) return h.at(t + 0.5 * dt) * dt;
  const double c = std::sqrt(3.0) / 6.0;
  Matrix h1 = h.at(t + (0.5 - c) * dt);
  Matrix h2 = h.at(t + (0.5 + c) * dt);
  // Omega = i K with K = dt/2 (H1 + H2) + i sqrt(3)/12 dt^2 [H2, H1].
  Matrix k = (h1 + h2) * (0.5 * dt) + commutator(h2, h1) * cplx(0.0, std::sqrt(3.0) / 12.0 * dt * dt);
  return hermitian_part(k);
}

inline std::vector<double> build_grid(const HamiltonianTrajectory& h, double t_end,
                                      double max_step, std::span<const double> extra_times,
                                      std::vector<std::size_t>& bounds) {
  std::vector<double> knots{0.0, t_end};
  for (double b : h.breakpoints(0.0, t_end)) knots.push_back(b);
  for (double e : extra_times) {
    if (!std::isfinite(e) || e < 0.0 || e > t_end) {
      throw ValidationError("extra sample time " + std::to_string(e) + " outside [0, t_end]");
    }
    knots.push_back(e);
  }
  std::sort(knots.begin(), knots.end());
  std::vector<double> merged;
  for (double k : knots) {
    if (merged.empty() || k - merged.back() > 1e-12) merged.push_back(k);
  }
  merged.back() = t_end;

  std::vector<double> grid{0.0};
  bounds.assign(1, 0);
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    double a = merged[i], b = merged[i + 1];
    double len = b - a;
    auto m = static_cast<long>(std::ceil(len / max_step - 1e-9));
    if (m < 2) m = 2;
    if (m % 2 != 0) ++m;  // even count per interval for composite Simpson
    double dt = len / static_cast<double>(m);
    if (dt < 1e-12) {
      throw NumericalError("step underflow: required step " + std::to_string(dt) +
                           " is below 1e-12 time units");
    }
    for (long j = 1; j < m; ++j) grid.push_back(a + dt * static_cast<double>(j));
    grid.push_back(b);
    bounds.push_back(grid.size() - 1);
  }
  return grid;
}

}  // namespace detail

/// Integrates U' = i H(t) U from U(0) = I to t_end.
///
/// Every interval between breakpoints of H (and requested extra times) is
/// split into an even number of equal steps no longer than the effective
/// max step. Constant Hamiltonians are exponentiated exactly at each sample.
inline UnitaryTrajectory evolve(const HamiltonianTrajectory& h, double t_end,
                                const StepPolicy& policy,
                                std::span<const double> extra_times = {}) {
  policy.validate();
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be positive");
  if (t_end > h.domain_end() + 1e-12 || 0.0 < h.domain_begin() - 1e-12) {
    throw ValidationError("evolution range [0, " + std::to_string(t_end) +
                          "] leaves the Hamiltonian's domain [" + std::to_string(h.domain_begin()) +
                          ", " + std::to_string(h.domain_end()) + "]");
  }

  UnitaryTrajectory out;
  out.policy = policy;
  double norm = h.max_spectral_norm();
  if (norm > 0.0) out.policy.max_step = std::min(policy.max_step, kPi / (8.0 * norm));
  out.times = detail::build_grid(h, t_end, out.policy.max_step, extra_times, out.interval_bounds);
  out.unitaries.reserve(out.times.size());
  const Eigen::Index n = h.dim();
  out.unitaries.push_back(identity(n));

  if (h.kind() == HamiltonianTrajectory::Kind::constant) {
    auto es = detail::hermitian_solve(h.matrices().front());
    for (std::size_t k = 1; k < out.times.size(); ++k) {
      Vector ph(n);
      for (Eigen::Index i = 0; i < n; ++i) ph(i) = std::polar(1.0, es.eigenvalues()(i) * out.times[k]);
      out.unitaries.push_back(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
    }
    return out;
  }

  Matrix u = identity(n);
  for (std::size_t k = 0; k + 1 < out.times.size(); ++k) {
    double t = out.times[k], dt = out.times[k + 1] - t;
    u = exp_i(detail::step_generator(h, t, dt, out.policy.rule)) * u;
    if ((k + 1) % static_cast<std::size_t>(out.policy.reunitarize_every) == 0 ||
        unitarity_defect(u) > out.policy.tolerance) {
      u = reunitarize(u);
    }
    out.unitaries.push_back(u);
  }
  return out;
}

inline UnitaryTrajectory evolve(const HamiltonianTrajectory& h, double t_end,
                                std::span<const double> extra_times = {}) {
  return evolve(h, t_end, default_step_policy(h), extra_times);
}

struct TimedState {
  double time = 0.0;
  StateVector state;
};

/// U(t) psi0 at a sample time t.
inline StateVector apply(const UnitaryTrajectory& traj, const StateVector& psi0, double t) {
  if (psi0.dim() != traj.dim()) throw ValidationError("state dimension does not match trajectory");
  return StateVector::normalized(traj.at(t) * psi0.amplitudes());
}

inline std::vector<TimedState> state_trajectory(const UnitaryTrajectory& traj,
                                                const StateVector& psi0) {
  if (psi0.dim() != traj.dim()) throw ValidationError("state dimension does not match trajectory");
  std::vector<TimedState> out;
  out.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out.push_back({traj.times[k], StateVector::normalized(traj.unitaries[k] * psi0.amplitudes())});
  }
  return out;
}

}  // namespace qeffort

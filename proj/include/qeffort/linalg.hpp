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

// Dense complex linear algebra used throughout qeffort: Hermitian and
// unitary spectral decomposition, the e^{+iA} exponential and its principal
// inverse, and re-unitarization of drifting products.
//
// Sign convention: time evolution is U = e^{+iA}, so a Hamiltonian H held
// for time t produces exp_i(H * t).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qeffort/error.hpp"

namespace qeffort {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kNormTol = 1e-12;
/// Absolute eigenvalue gap below which two eigenvalues count as degenerate.
inline constexpr double kDegeneracyTol = 1e-9;

// ---------------------------------------------------------------------------
// Small helpers

inline Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0.0, cplx(0, -1), cplx(0, 1), 0.0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).norm();
}

inline double unitarity_defect(const Matrix& m) {
  return (m.adjoint() * m - identity(m.cols())).norm();
}

/// |Tr(V^dagger U)| / dim; equals 1 exactly when U and V agree up to a global phase.
inline double operator_fidelity(const Matrix& u, const Matrix& v) {
  return std::abs((v.adjoint() * u).trace()) / static_cast<double>(u.rows());
}

/// Principal argument in (-pi, pi]. std::arg returns -pi for a negative real
/// with a negative-zero imaginary part; that case is mapped to +pi.
inline double principal_arg(cplx z) {
  if (z.imag() == 0.0 && z.real() < 0.0) return kPi;
  return std::arg(z);
}

/// Reduces an angle to (-pi, pi].
inline double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

inline std::string format_complex(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

inline void require_square(const Matrix& m, const char* what = "matrix") {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ValidationError(std::string(what) + " must be square and non-empty, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw ValidationError(std::string(what) + " has non-finite entries");
}

/// Throws naming the most asymmetric entry when m is not Hermitian.
inline void require_hermitian(const Matrix& m, const char* what = "matrix",
                              double tol = kHermitianTol) {
  require_square(m, what);
  if (hermiticity_defect(m) < tol) return;
  Eigen::Index bi = 0, bj = 0;
  double worst = -1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      double d = std::abs(m(i, j) - std::conj(m(j, i)));
      if (d > worst) {
        worst = d;
        bi = i;
        bj = j;
      }
    }
  }
  std::ostringstream os;
  os << what << " is not Hermitian: entry [" << bi << "][" << bj << "] = "
     << format_complex(m(bi, bj)) << " but entry [" << bj << "][" << bi
     << "] = " << format_complex(m(bj, bi));
  throw ValidationError(os.str());
}

inline void require_unitary(const Matrix& m, const char* what = "matrix",
                            double tol = kUnitaryTol) {
  require_square(m, what);
  double d = unitarity_defect(m);
  if (d >= tol) {
    std::ostringstream os;
    os << what << " is not unitary: |M^dagger M - I|_F = " << d;
    throw ValidationError(os.str());
  }
}

inline Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

// ---------------------------------------------------------------------------
// StateVector

/// Normalized pure state. Construction checks the norm against kNormTol;
/// use normalized() to rescale an arbitrary nonzero vector.
class StateVector {
 public:
  explicit StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) throw ValidationError("state vector must be non-empty");
    if (!amps_.allFinite()) throw ValidationError("state vector has non-finite amplitudes");
    double n = amps_.norm();
    if (std::abs(n - 1.0) > kNormTol) {
      std::ostringstream os;
      os.precision(17);
      os << "state vector is not normalized: norm = " << n;
      throw ValidationError(os.str());
    }
  }

  static StateVector normalized(const Vector& v) {
    double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw ValidationError("cannot normalize a zero or non-finite vector");
    }
    return StateVector(v / n);
  }

  static StateVector basis(Eigen::Index dim, Eigen::Index index) {
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return StateVector(std::move(v));
  }

  Eigen::Index dim() const { return amps_.size(); }
  const Vector& amplitudes() const { return amps_; }
  cplx operator[](Eigen::Index i) const { return amps_(i); }

  /// <this|other>
  cplx inner(const StateVector& other) const { return amps_.dot(other.amps_); }

  double expectation(const Matrix& op) const {
    return amps_.dot(op * amps_).real();
  }

 private:
  Vector amps_;
};

// ---------------------------------------------------------------------------
// Spectral decomposition

enum class SpectrumKind { hermitian, unitary };

struct EigenSystem {
  SpectrumKind kind = SpectrumKind::hermitian;
  /// Real for Hermitian input, unit modulus for unitary input.
  Vector values;
  /// Orthonormal eigenvectors as columns, in the same order as values.
  Matrix vectors;
  /// degenerate[i] is set when values[i] lies within kDegeneracyTol of another eigenvalue.
  std::vector<bool> degenerate;

  Eigen::Index dim() const { return values.size(); }

  bool any_degenerate() const {
    return std::any_of(degenerate.begin(), degenerate.end(), [](bool b) { return b; });
  }

  RealVector real_values() const { return values.real(); }

  /// Principal eigenphases in (-pi, pi] (unitary spectra).
  RealVector phases() const {
    RealVector p(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) p(i) = principal_arg(values(i));
    return p;
  }

  Matrix reconstruct() const {
    return vectors * values.asDiagonal() * vectors.adjoint();
  }
};

namespace detail {

// Splits an ascending eigenvalue list into runs whose adjacent gaps are below tol.
inline std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters(const RealVector& sorted,
                                                                   double tol) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= sorted.size(); ++i) {
    if (i == sorted.size() || sorted(i) - sorted(i - 1) >= tol) {
      out.emplace_back(start, i - start);
      start = i;
    }
  }
  return out;
}

inline Eigen::SelfAdjointEigenSolver<Matrix> hermitian_solve(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver failed to converge");
  }
  return es;
}

// Gap at which refinement levels split an eigenvalue group. Larger than the
// degeneracy tolerance so that nearly coincident eigenvalues are always
// separated by the better-conditioned later level.
inline constexpr double kRefineTol = 1e-6;

// Refines an orthonormal basis `basis` of a U-invariant subspace into
// eigenvectors of U, using only Hermitian eigensolves.
inline Matrix refine_unitary_block(const Matrix& u, const Matrix& basis, int level) {
  const Eigen::Index m = basis.cols();
  if (m == 1) return basis;
  Matrix block = basis.adjoint() * u * basis;
  Matrix generator;
  if (level == 0) {
    // (U - U^dagger) / 2i separates the +phi / -phi pairs that share cos(phi).
    generator = (block - block.adjoint()) * cplx(0.0, -0.5);
  } else {
    // Rotate the block to unit mean phase; the imaginary part then separates
    // the remaining eigenvalues linearly in their phase difference.
    cplx tr = block.trace();
    cplx rot = std::abs(tr) > 0.0 ? std::conj(tr) / std::abs(tr) : cplx(1.0, 0.0);
    Matrix w = block * rot;
    generator = (w - w.adjoint()) * cplx(0.0, -0.5);
  }
  auto es = hermitian_solve(generator);
  Matrix local = es.eigenvectors();
  if (level == 1) return basis * local;
  Matrix out(basis.rows(), m);
  for (auto [start, len] : clusters(es.eigenvalues(), kRefineTol)) {
    Matrix sub = basis * local.middleCols(start, len);
    out.middleCols(start, len) = refine_unitary_block(u, sub, level + 1);
  }
  return out;
}

}  // namespace detail

/// Eigen-decomposition of a Hermitian or unitary matrix.
///
/// Hermitian spectra are sorted ascending. Unitary spectra are sorted by
/// principal argument and are computed through Hermitian solves only: first
/// (U + U^dagger)/2, then (U - U^dagger)/2i inside each cluster, then a
/// phase-rotated imaginary part inside any cluster that remains.
inline EigenSystem spectral_decompose(const Matrix& m, SpectrumKind kind) {
  require_square(m);
  EigenSystem out;
  out.kind = kind;
  const Eigen::Index n = m.rows();
  if (kind == SpectrumKind::hermitian) {
    if (hermiticity_defect(m) >= kHermitianTol) {
      throw ValidationError("spectral_decompose: matrix is neither Hermitian nor flagged unitary");
    }
    auto es = detail::hermitian_solve(m);
    out.values = es.eigenvalues().cast<cplx>();
    out.vectors = es.eigenvectors();
    out.degenerate.assign(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (es.eigenvalues()(i + 1) - es.eigenvalues()(i) < kDegeneracyTol) {
        out.degenerate[i] = out.degenerate[i + 1] = true;
      }
    }
    return out;
  }

  if (unitarity_defect(m) >= kUnitaryTol) {
    throw ValidationError("spectral_decompose: matrix is neither unitary nor flagged Hermitian");
  }
  auto es = detail::hermitian_solve(hermitian_part(m));
  Matrix vecs(n, n);
  for (auto [start, len] : detail::clusters(es.eigenvalues(), detail::kRefineTol)) {
    vecs.middleCols(start, len) =
        detail::refine_unitary_block(m, es.eigenvectors().middleCols(start, len), 0);
  }

  // Rayleigh quotients, projected onto the unit circle.
  Vector vals(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx q = vecs.col(i).dot(m * vecs.col(i));
    vals(i) = std::abs(q) > 0.0 ? q / std::abs(q) : cplx(1.0, 0.0);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return principal_arg(vals(a)) < principal_arg(vals(b));
  });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = vals(order[i]);
    out.vectors.col(i) = vecs.col(order[i]);
  }
  out.degenerate.assign(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(out.values(i) - out.values(j)) < kDegeneracyTol) {
        out.degenerate[i] = out.degenerate[j] = true;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exponential and logarithm

/// e^{+iA} for Hermitian A, computed spectrally.
inline Matrix exp_i(const Matrix& a) {
  require_hermitian(a, "exp_i argument");
  auto es = detail::hermitian_solve(a);
  Vector phases(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) phases(i) = std::polar(1.0, es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Builds sum_i phase_i |v_i><v_i|.
inline Matrix from_spectrum(const Matrix& vectors, const RealVector& eigenvalues) {
  return vectors * eigenvalues.cast<cplx>().asDiagonal() * vectors.adjoint();
}

/// Hermitian A with e^{iA} = U and every eigenvalue in (-pi, pi]. This is a
/// single-point branch choice; continuous tracking lives in action.hpp.
inline Matrix principal_log_unitary(const Matrix& u) {
  require_unitary(u, "principal_log_unitary argument");
  auto es = spectral_decompose(u, SpectrumKind::unitary);
  return hermitian_part(from_spectrum(es.vectors, es.phases()));
}

/// Closest unitary in Frobenius norm (the polar factor of m).
inline Matrix reunitarize(const Matrix& m) {
  require_square(m);
  double d = unitarity_defect(m);
  if (!(d < 0.1)) {
    std::ostringstream os;
    os << "reunitarize: input too far from unitary (|M^dagger M - I|_F = " << d
       << "); integrator step failed";
    throw NumericalError(os.str());
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Largest absolute eigenvalue of a Hermitian matrix.
inline double spectral_norm_hermitian(const Matrix& h) {
  auto es = detail::hermitian_solve(h);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(h.rows() - 1)));
}

}  // namespace qeffort

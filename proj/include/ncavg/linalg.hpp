#pragma once

// Dense complex linear algebra used by every solver: a cyclic Jacobi
// Hermitian eigensolver, a one-sided Jacobi SVD, polar decomposition,
// eigenphase clustering and Haar-random unitaries.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "ncavg/errors.hpp"

namespace ncavg {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVectorOf = Eigen::Matrix<typename Eigen::NumTraits<Scalar>::Real, Eigen::Dynamic, 1>;

/// Eigenvalues in descending order; eigenvectors are the matching columns.
template <typename Scalar>
struct HermitianEig {
  RealVectorOf<Scalar> eigenvalues;
  DenseMatrix<Scalar> eigenvectors;
};

/// A = left * diag(singular_values) * right^*, singular values descending.
template <typename Scalar>
struct SvdResult {
  RealVectorOf<Scalar> singular_values;
  DenseMatrix<Scalar> left;
  DenseMatrix<Scalar> right;
};

template <typename Scalar>
struct PolarDecomposition {
  DenseMatrix<Scalar> unitary;
  DenseMatrix<Scalar> modulus;  // |B| = (B^* B)^{1/2}
};

/// Orthonormal eigenbasis of a unitary with the principal eigenphases
/// (in (-pi, pi]) on the diagonal: U = basis * diag(exp(i phases)) * basis^*.
struct UnitarySpectrum {
  ComplexMatrix basis;
  RealVector phases;

  ComplexMatrix along_path(double s) const {
    const ComplexVector diag =
        phases.unaryExpr([s](double t) { return std::polar(1.0, s * t); });
    return basis * diag.asDiagonal() * basis.adjoint();
  }
};

inline constexpr double kClusterTolerance = 1e-7;
inline constexpr double kInvSqrt2 = 0.70710678118654752440084436210484903928483593768847;

namespace detail {

template <typename Scalar>
Scalar unit_phase(const Scalar& z) {
  using std::abs;
  const auto r = abs(z);
  if (r == 0) return Scalar(1);
  return z / r;
}

// Unitary G = [[c, s], [-s conj(e), c conj(e)]] that diagonalizes the Hermitian
// 2x2 block [[app, apq], [conj(apq), aqq]] via G^* block G, where e = apq/|apq|.
template <typename Scalar>
struct PlaneRotation {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  Real c;
  Real s;
  Scalar phase;

  static PlaneRotation make(Real app, Real aqq, const Scalar& apq) {
    using std::abs;
    const Real magnitude = abs(apq);
    const Real zeta = (aqq - app) / (Real(2) * magnitude);
    const Real t = (zeta >= 0 ? Real(1) : Real(-1)) / (abs(zeta) + std::hypot(Real(1), zeta));
    const Real c = Real(1) / std::sqrt(Real(1) + t * t);
    return {c, t * c, apq / magnitude};
  }

  // M <- M G restricted to columns p, q.
  template <typename Matrix>
  void apply_right(Matrix& m, Index p, Index q) const {
    using Eigen::numext::conj;
    const Scalar phase_bar = conj(phase);
    for (Index i = 0; i < m.rows(); ++i) {
      const Scalar mp = m(i, p);
      const Scalar mq = m(i, q);
      m(i, p) = c * mp - s * phase_bar * mq;
      m(i, q) = s * mp + c * phase_bar * mq;
    }
  }

  // M <- G^* M restricted to rows p, q.
  template <typename Matrix>
  void apply_left_adjoint(Matrix& m, Index p, Index q) const {
    for (Index j = 0; j < m.cols(); ++j) {
      const Scalar mp = m(p, j);
      const Scalar mq = m(q, j);
      m(p, j) = c * mp - s * phase * mq;
      m(q, j) = s * mp + c * phase * mq;
    }
  }
};

// Descending order, ties broken by original index.
template <typename Vector>
std::vector<Index> descending_order(const Vector& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) > values(b); });
  return order;
}

inline constexpr int kMaxSweeps = 100;

}  // namespace detail

/// Extend the orthonormal columns of `basis` (m x k) by `count` further
/// orthonormal columns, built by Gram-Schmidt on the standard basis.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> orthonormal_completion(const Eigen::MatrixBase<Derived>& basis,
                                                             Index count) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  const Index m = basis.rows();
  DenseMatrix<Scalar> frame(m, basis.cols() + count);
  frame.leftCols(basis.cols()) = basis;
  Index filled = basis.cols();
  while (filled < basis.cols() + count) {
    // Pick the standard basis vector with the largest residual.
    Index best = -1;
    Real best_norm = 0;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> best_vec;
    for (Index i = 0; i < m; ++i) {
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Unit(m, i);
      for (int pass = 0; pass < 2; ++pass) {
        const auto q = frame.leftCols(filled);
        v -= q * (q.adjoint() * v);
      }
      const Real norm = v.norm();
      if (norm > best_norm + Real(1e-3)) {
        best = i;
        best_norm = norm;
        best_vec = v;
      }
    }
    if (best < 0 || best_norm <= Real(1e-8)) {
      throw Error(ErrorCode::InvalidArgument, "orthonormal_completion: basis already spans the space");
    }
    frame.col(filled++) = best_vec / best_norm;
  }
  return frame.rightCols(count);
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
template <typename Derived>
HermitianEig<typename Derived::Scalar> hermitian_eig(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using std::abs;
  if (input.rows() != input.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "hermitian_eig: matrix is not square");
  }
  const Index n = input.rows();
  const Real frob = input.norm();
  const Real asymmetry = (input - input.adjoint()).norm();
  if (!(asymmetry <= Real(1e-12) * (Real(1) + frob))) {
    throw Error(ErrorCode::NotHermitian, "hermitian_eig: input is not self-adjoint");
  }

  DenseMatrix<Scalar> m = (input + input.adjoint()) / Real(2);
  DenseMatrix<Scalar> v = DenseMatrix<Scalar>::Identity(n, n);
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real floor = std::numeric_limits<Real>::min() / eps;

  bool rotated = true;
  for (int sweep = 0; sweep < detail::kMaxSweeps && rotated; ++sweep) {
    rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Scalar apq = m(p, q);
        const Real magnitude = abs(apq);
        const Real app = Eigen::numext::real(m(p, p));
        const Real aqq = Eigen::numext::real(m(q, q));
        if (magnitude <= floor || magnitude <= eps * std::sqrt(abs(app) * abs(aqq)) ||
            magnitude <= eps * eps * frob) {
          continue;
        }
        rotated = true;
        const auto g = detail::PlaneRotation<Scalar>::make(app, aqq, apq);
        g.apply_right(m, p, q);
        g.apply_left_adjoint(m, p, q);
        m(p, q) = Scalar(0);
        m(q, p) = Scalar(0);
        g.apply_right(v, p, q);
      }
    }
  }

  Real off = 0;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (i != j) off += Eigen::numext::abs2(m(i, j));
  if (std::sqrt(off) > Real(1e-12) * frob) {
    throw Error(ErrorCode::NoConvergence, "hermitian_eig: Jacobi sweeps did not converge");
  }

  const RealVectorOf<Scalar> diag = m.diagonal().real();
  const auto order = detail::descending_order(diag);
  HermitianEig<Scalar> result;
  result.eigenvalues.resize(n);
  result.eigenvectors.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    result.eigenvalues(j) = diag(order[static_cast<std::size_t>(j)]);
    result.eigenvectors.col(j) = v.col(order[static_cast<std::size_t>(j)]);
  }
  return result;
}

namespace detail {

// One-sided (Hestenes) Jacobi for rows >= cols.
template <typename Scalar>
SvdResult<Scalar> svd_tall(DenseMatrix<Scalar> w) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using std::abs;
  const Index m = w.rows();
  const Index n = w.cols();
  DenseMatrix<Scalar> v = DenseMatrix<Scalar>::Identity(n, n);
  const Real tol = std::numeric_limits<Real>::epsilon() * std::sqrt(Real(std::max<Index>(m, 1)));
  const Real floor = std::numeric_limits<Real>::min();

  bool rotated = true;
  int sweep = 0;
  for (; sweep < kMaxSweeps && rotated; ++sweep) {
    rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Real alpha = w.col(p).squaredNorm();
        const Real beta = w.col(q).squaredNorm();
        const Scalar gamma = w.col(p).dot(w.col(q));
        const Real magnitude = abs(gamma);
        if (magnitude <= floor || magnitude <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const auto g = PlaneRotation<Scalar>::make(alpha, beta, gamma);
        g.apply_right(w, p, q);
        g.apply_right(v, p, q);
      }
    }
  }
  if (rotated) {
    throw Error(ErrorCode::NoConvergence, "svd: one-sided Jacobi did not converge");
  }

  RealVectorOf<Scalar> norms(n);
  for (Index j = 0; j < n; ++j) norms(j) = w.col(j).norm();
  const auto order = descending_order(norms);

  SvdResult<Scalar> result;
  result.singular_values.resize(n);
  result.right.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    result.singular_values(j) = norms(order[static_cast<std::size_t>(j)]);
    result.right.col(j) = v.col(order[static_cast<std::size_t>(j)]);
  }

  // Columns whose singular value is numerically zero get a completed frame.
  const Real largest = n > 0 ? result.singular_values(0) : Real(0);
  const Real negligible = largest * Real(1e-14) * Real(std::max<Index>(m, n));
  Index rank = 0;
  while (rank < n && result.singular_values(rank) > negligible && result.singular_values(rank) > floor) ++rank;
  result.left.resize(m, n);
  for (Index j = 0; j < rank; ++j) {
    result.left.col(j) = w.col(order[static_cast<std::size_t>(j)]) / result.singular_values(j);
  }
  if (rank < n) {
    result.left.rightCols(n - rank) = orthonormal_completion(result.left.leftCols(rank), n - rank);
  }
  return result;
}

}  // namespace detail

/// Singular value decomposition; frames are thin (min(m, n) columns).
template <typename Derived>
SvdResult<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() >= a.cols()) {
    return detail::svd_tall<Scalar>(DenseMatrix<Scalar>(a));
  }
  auto flipped = detail::svd_tall<Scalar>(DenseMatrix<Scalar>(a.adjoint()));
  std::swap(flipped.left, flipped.right);
  return flipped;
}

/// B = U |B| with U unitary; on a singular B the kernel is completed so U
/// stays a full unitary.
template <typename Derived>
PolarDecomposition<typename Derived::Scalar> polar_decompose(const Eigen::MatrixBase<Derived>& b) {
  using Scalar = typename Derived::Scalar;
  if (b.rows() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "polar_decompose: matrix is not square");
  }
  const auto f = svd(b);
  PolarDecomposition<Scalar> result;
  result.unitary = f.left * f.right.adjoint();
  DenseMatrix<Scalar> modulus =
      f.right * f.singular_values.template cast<Scalar>().asDiagonal() * f.right.adjoint();
  result.modulus = (modulus + modulus.adjoint()) / 2.0;
  return result;
}

template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real unitarity_residual(
    const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - DenseMatrix<Scalar>::Identity(u.rows(), u.cols())).norm();
}

/// Principal eigenphases of a (numerically) unitary matrix, unsorted.
template <typename Derived>
RealVector eigenphases(const Eigen::MatrixBase<Derived>& u) {
  if (u.rows() != u.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "eigenphases: matrix is not square");
  }
  if (!(unitarity_residual(u) <= 1e-8)) {
    throw Error(ErrorCode::NotUnitary, "eigenphases: matrix is not unitary");
  }
  const ComplexMatrix uc = u.template cast<Complex>();
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(uc, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "eigenphases: eigenvalue iteration failed");
  }
  return solver.eigenvalues().unaryExpr([](const Complex& z) { return std::arg(z); });
}

/// Number of clusters of eigenvalues on the unit circle: phases are sorted
/// and split wherever the circular gap exceeds `tol`.
template <typename Derived>
std::size_t eigenphase_clusters(const Eigen::MatrixBase<Derived>& u, double tol = kClusterTolerance) {
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "eigenphase_clusters: tol must be positive");
  RealVector phases = eigenphases(u);
  std::vector<double> sorted(phases.data(), phases.data() + phases.size());
  std::sort(sorted.begin(), sorted.end());
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::size_t gaps = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double next = i + 1 < sorted.size() ? sorted[i + 1] : sorted.front() + two_pi;
    if (next - sorted[i] > tol) ++gaps;
  }
  return std::max<std::size_t>(gaps, 1);
}

/// Orthonormal eigenbasis and principal phases of a unitary, via a complex
/// Schur form (diagonal for normal matrices).
inline UnitarySpectrum unitary_spectrum(const ComplexMatrix& u) {
  if (!(unitarity_residual(u) <= 1e-8)) {
    throw Error(ErrorCode::NotUnitary, "unitary_spectrum: matrix is not unitary");
  }
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "unitary_spectrum: Schur iteration failed");
  }
  UnitarySpectrum spectrum;
  spectrum.basis = schur.matrixU();
  spectrum.phases = schur.matrixT().diagonal().unaryExpr([](const Complex& z) { return std::arg(z); });
  return spectrum;
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// R's diagonal folded back into Q.
template <typename Urng>
ComplexMatrix haar_unitary(Index n, Urng& gen) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "haar_unitary: n must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double re = normal(gen);
      const double im = normal(gen);
      z(i, j) = Complex(re, im) * kInvSqrt2;
    }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexVector r_diag = qr.matrixQR().diagonal();
  for (Index j = 0; j < n; ++j) q.col(j) *= detail::unit_phase(r_diag(j));
  return q;
}

inline ComplexMatrix haar_unitary(Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return haar_unitary(n, gen);
}

inline double arg_or_zero(Complex z) { return z == Complex(0.0, 0.0) ? 0.0 : std::arg(z); }

}  // namespace ncavg

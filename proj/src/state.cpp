#include "ncavg/state.hpp"

#include <string>

namespace ncavg {

namespace {

constexpr double kDensityTolerance = 1e-10;

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": non-finite entry");
  }
}

}  // namespace

DensityState::DensityState(const ComplexMatrix& density) {
  require_square(density, "DensityState");
  const double frob = density.norm();
  if ((density - density.adjoint()).norm() > kDensityTolerance * (1.0 + frob)) {
    throw Error(ErrorCode::NotHermitian, "DensityState: density matrix is not self-adjoint");
  }
  const Complex trace = density.trace();
  if (std::abs(trace - 1.0) > kDensityTolerance) {
    throw Error(ErrorCode::NotDensity, "DensityState: trace differs from one");
  }
  const ComplexMatrix hermitian = (density + density.adjoint()) / 2.0;
  auto eig = hermitian_eig(hermitian);
  if (eig.eigenvalues.minCoeff() < -kDensityTolerance) {
    throw Error(ErrorCode::NotDensity, "DensityState: density matrix is not positive semidefinite");
  }
  weights_ = eig.eigenvalues.cwiseMax(0.0);
  weights_ /= weights_.sum();
  frame_ = std::move(eig.eigenvectors);
  matrix_ = frame_ * weights_.cast<Complex>().asDiagonal() * frame_.adjoint();
  matrix_ = (matrix_ + matrix_.adjoint()) / 2.0;
}

DensityState DensityState::rotated(const ComplexMatrix& u) const {
  if (u.rows() != dimension() || u.cols() != dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "DensityState::rotated: dimension mismatch");
  }
  return DensityState(u * matrix_ * u.adjoint());
}

Complex trace_of_product(const ComplexMatrix& b, const ComplexMatrix& x) {
  if (b.cols() != x.rows() || b.rows() != x.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "trace_of_product: dimension mismatch");
  }
  // tr(BX) = sum_ij B_ij X_ji
  return b.cwiseProduct(x.transpose()).sum();
}

Complex state_apply(const DensityState& state, const ComplexMatrix& x) {
  return trace_of_product(state.matrix(), x);
}

Complex functional_apply(const TraceFunctional& functional, const ComplexMatrix& x) {
  return trace_of_product(functional.matrix(), x);
}

TraceFunctional normalize_functional(const ComplexMatrix& b) {
  require_square(b, "normalize_functional");
  auto decomposition = svd(b);
  const double scale = decomposition.singular_values.sum();
  if (scale <= 1e-14) {
    throw Error(ErrorCode::ZeroFunctional, "normalize_functional: trace norm vanishes");
  }
  decomposition.singular_values /= scale;
  return TraceFunctional(b / scale, std::move(decomposition), scale);
}

TraceFunctional TraceFunctional::from_normalized(const ComplexMatrix& b) {
  TraceFunctional f = normalize_functional(b);
  if (std::abs(f.original_scale() - 1.0) > kDensityTolerance) {
    throw Error(ErrorCode::NotNormalized, "TraceFunctional: trace norm differs from one");
  }
  f.scale_ = 1.0;
  return f;
}

}  // namespace ncavg

#pragma once

#include "ncavg/linalg.hpp"

namespace ncavg {

/// A state X -> tr(A X) on M_n given by a density matrix A.
///
/// Construction validates A (self-adjoint and trace one to 1e-10, eigenvalues
/// no lower than -1e-10), clamps small negative eigenvalues to zero and
/// renormalizes. The eigen-decomposition is cached with weights sorted
/// descending; the stored matrix is rebuilt from that cache.
class DensityState {
 public:
  explicit DensityState(const ComplexMatrix& density);

  Index dimension() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  /// Eigenvalues c_1 >= ... >= c_n.
  const RealVector& weights() const { return weights_; }
  /// Orthonormal eigenvectors, column j belongs to weights()(j).
  const ComplexMatrix& frame() const { return frame_; }

  /// The state with density U A U^*.
  DensityState rotated(const ComplexMatrix& u) const;

 private:
  ComplexMatrix matrix_;
  RealVector weights_;
  ComplexMatrix frame_;
};

/// A linear functional X -> tr(B X), normalized to operator-norm dual one
/// (trace norm tr|B| = 1).
class TraceFunctional {
 public:
  /// Accepts B only if tr|B| = 1 within 1e-10.
  static TraceFunctional from_normalized(const ComplexMatrix& b);

  Index dimension() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const SvdResult<Complex>& decomposition() const { return svd_; }
  double trace_norm() const { return svd_.singular_values.sum(); }
  /// tr|B| of the matrix that was normalized (1 for from_normalized).
  double original_scale() const { return scale_; }

 private:
  friend TraceFunctional normalize_functional(const ComplexMatrix& b);
  TraceFunctional(ComplexMatrix b, SvdResult<Complex> svd, double scale)
      : matrix_(std::move(b)), svd_(std::move(svd)), scale_(scale) {}

  ComplexMatrix matrix_;
  SvdResult<Complex> svd_;
  double scale_ = 1.0;
};

Complex state_apply(const DensityState& state, const ComplexMatrix& x);

Complex functional_apply(const TraceFunctional& functional, const ComplexMatrix& x);

/// B / tr|B|; throws ZeroFunctional when tr|B| <= 1e-14.
TraceFunctional normalize_functional(const ComplexMatrix& b);

/// tr(B X) without forming the product.
Complex trace_of_product(const ComplexMatrix& b, const ComplexMatrix& x);

}  // namespace ncavg

#pragma once

#include <vector>

#include "ncavg/linalg.hpp"
#include "ncavg/state.hpp"

namespace ncavg {

/// A point w of the closed unit disk.
class DiskTarget {
 public:
  /// Throws TargetOutsideDisk when |w| > 1 + 1e-12.
  explicit DiskTarget(Complex w);

  Complex value() const { return value_; }
  /// |w| clamped to [0, 1].
  double modulus() const;
  /// arg w, with arg 0 = 0.
  double argument() const { return arg_or_zero(value_); }

 private:
  Complex value_;
};

/// Unitary e^{i alpha} sum_j e^{i theta_j} P_j with at most three spectral
/// projections P_j = F_j F_j^*. The eigenvalue budget is part of the type.
class SpectralUnitary {
 public:
  static constexpr std::size_t kMaxEigenvalues = 3;

  SpectralUnitary(std::vector<double> phases, std::vector<ComplexMatrix> frames, double global_phase = 0.0);

  Index dimension() const { return frames_.front().rows(); }
  std::size_t eigenvalue_count() const { return phases_.size(); }
  const std::vector<double>& phases() const { return phases_; }
  const std::vector<ComplexMatrix>& frames() const { return frames_; }
  double global_phase() const { return global_phase_; }

  ComplexMatrix matrix() const;

  /// V U V^*: frames become V F_j.
  SpectralUnitary conjugated_by(const ComplexMatrix& v) const;
  /// The point at parameter s of the path sum_j e^{i s theta_j} P_j from I;
  /// the global phase is dropped.
  SpectralUnitary along_path(double s) const;
  /// Multiplies by e^{i beta}.
  SpectralUnitary rotated(double beta) const;
  /// Global phase folded into the eigenphases, each reduced to (-pi, pi].
  SpectralUnitary with_folded_phase() const;

 private:
  std::vector<double> phases_;
  std::vector<ComplexMatrix> frames_;
  double global_phase_;
};

/// Direct sum of n/2 swap blocks [[0, 1], [1, 0]]: zero diagonal, eigenvalues {1, -1}.
SpectralUnitary even_zero_unitary(Index n);

/// Two-eigenvalue unitary in the weight basis whose weighted diagonal average
/// sum_j c_j U_jj equals w, for even n. Every diagonal entry equals w.
SpectralUnitary even_disk_unitary(const RealVector& weights, DiskTarget w);

/// Three-eigenvalue unitary U_0 (+) 1 with sum_j c_j U_jj = 0, for odd n >= 3
/// and weights sorted descending.
SpectralUnitary odd_zero_unitary(const RealVector& weights);

/// Unitary with at most 2 (even n) or 3 (odd n) eigenvalues and tr(A U) = w.
SpectralUnitary solve_state_unitary(const DensityState& state, DiskTarget w);

/// Unitary X_0 with tr(B X_0) = w for a normalized functional.
ComplexMatrix solve_functional_unitary(const TraceFunctional& functional, DiskTarget w);

struct RankOneDyad {
  ComplexVector x;
  ComplexVector y;

  /// x (x) y^* as a matrix, i.e. x y^*.
  ComplexMatrix matrix() const { return x * y.adjoint(); }
};

/// Unit vectors x, y with <Bx, y> = tr(B x y^*) = 0.
RankOneDyad rank_one_annihilator(const ComplexMatrix& b);
RankOneDyad rank_one_annihilator(const TraceFunctional& functional);

/// n points on the unit circle whose mean is w.
std::vector<Complex> commutative_average(Index n, DiskTarget w);

}  // namespace ncavg

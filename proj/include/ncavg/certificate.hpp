#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncavg/extreme.hpp"
#include "ncavg/infdim.hpp"
#include "ncavg/linalg.hpp"

namespace ncavg {

// Pass thresholds.
inline constexpr double kUnitarityThreshold = 1e-9;
inline constexpr double kTargetThreshold = 1e-8;
inline constexpr double kNormThreshold = 1e-9;
inline constexpr double kAnnihilatorThreshold = 1e-12;
inline constexpr double kUnitVectorThreshold = 1e-12;
inline constexpr double kAverageThreshold = 1e-12;
inline constexpr double kContainmentThreshold = 1e-10;
inline constexpr double kFrameThreshold = 1e-12;
inline constexpr double kProjectionSlack = 1e-10;

/// Independently recomputed residuals of a construction. Absent fields do not
/// apply to the construction.
struct Certificate {
  std::string construction;
  std::optional<double> unitarity_residual;
  std::optional<std::size_t> eigenphase_clusters;
  std::optional<std::size_t> cluster_budget;
  std::optional<double> target_residual;
  std::optional<double> norm_residual;
  std::optional<double> structure_residual;
  std::optional<double> containment_residual;
  std::optional<double> orthonormality_residual;
  std::optional<double> error_bound;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// U unitary, at most 2 (even n) / 3 (odd n) clusters, |tr(AU) - w| small.
Certificate certify_state_unitary(const ComplexMatrix& density, const ComplexMatrix& u, Complex w,
                                  double tol = kClusterTolerance);

Certificate certify_functional_unitary(const ComplexMatrix& b, const ComplexMatrix& x, Complex w);

/// Unit x, y and |<Bx, y>| <= 1e-12 * max(1, ||B||).
Certificate certify_rank_one(const ComplexMatrix& b, const ComplexVector& x, const ComplexVector& y);

/// Norm one under the plugin, family structure, |tr(B E) - w| small.
Certificate certify_extreme(const ComplexMatrix& b, const ExtremePoint& point, Complex w,
                            const NormPlugin& plugin);

/// Structural residual of the tagged family: singular values all 1/k for a
/// scaled unitary, (1, 0, ...) for a dyad, zero for a sphere point.
double extreme_structure_residual(const ExtremePoint& point, const NormPlugin& plugin);

/// |phi(Q) - t| <= eps + 1e-10, orthonormal frame, finite rank; with `outer`
/// also Q <= outer.
Certificate certify_projection(const NormalState& state, const LazyProjection& q, double t,
                               const LazyProjection* outer = nullptr);

/// phi(Q_j) = 2^{-j} within j (eps + 1e-10) and nesting residual <= 1e-10.
Certificate certify_ladder(const NormalState& state, const std::vector<LazyProjection>& ladder);

Certificate certify_average(const std::vector<Complex>& points, Complex w);

}  // namespace ncavg

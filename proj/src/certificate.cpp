#include "ncavg/certificate.hpp"

#include <cmath>
#include <sstream>

#include "ncavg/state.hpp"

namespace ncavg {

namespace {

std::string describe(const char* what, double value, double limit) {
  std::ostringstream os;
  os.precision(3);
  os << what << " " << value << " exceeds " << limit;
  return os.str();
}

void check(Certificate& cert, const char* what, double value, double limit) {
  if (!(value <= limit)) cert.failures.push_back(describe(what, value, limit));
}

}  // namespace

Certificate certify_state_unitary(const ComplexMatrix& density, const ComplexMatrix& u, Complex w, double tol) {
  Certificate cert;
  cert.construction = "state_unitary";
  if (density.rows() != u.rows() || density.cols() != u.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "certify_state_unitary: dimension mismatch");
  }
  cert.unitarity_residual = unitarity_residual(u);
  check(cert, "unitarity residual", *cert.unitarity_residual, kUnitarityThreshold);
  cert.target_residual = std::abs(trace_of_product(density, u) - w);
  check(cert, "target residual", *cert.target_residual, kTargetThreshold);
  const Index n = u.rows();
  cert.cluster_budget = n == 1 ? 1 : (n % 2 == 0 ? 2 : 3);
  if (*cert.unitarity_residual <= 1e-8) {
    cert.eigenphase_clusters = eigenphase_clusters(u, tol);
    if (*cert.eigenphase_clusters > *cert.cluster_budget) {
      cert.failures.push_back("eigenphase cluster count " + std::to_string(*cert.eigenphase_clusters) +
                              " exceeds " + std::to_string(*cert.cluster_budget));
    }
  }
  return cert;
}

Certificate certify_functional_unitary(const ComplexMatrix& b, const ComplexMatrix& x, Complex w) {
  Certificate cert;
  cert.construction = "functional_unitary";
  if (b.rows() != x.rows() || b.cols() != x.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "certify_functional_unitary: dimension mismatch");
  }
  cert.unitarity_residual = unitarity_residual(x);
  check(cert, "unitarity residual", *cert.unitarity_residual, kUnitarityThreshold);
  cert.target_residual = std::abs(trace_of_product(b, x) - w);
  check(cert, "target residual", *cert.target_residual, kTargetThreshold);
  return cert;
}

Certificate certify_rank_one(const ComplexMatrix& b, const ComplexVector& x, const ComplexVector& y) {
  Certificate cert;
  cert.construction = "rank_one_annihilator";
  if (b.cols() != x.size() || b.rows() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "certify_rank_one: dimension mismatch");
  }
  cert.norm_residual = std::max(std::abs(x.norm() - 1.0), std::abs(y.norm() - 1.0));
  check(cert, "unit vector residual", *cert.norm_residual, kUnitVectorThreshold);
  const double scale = std::max(1.0, b.rows() > 0 ? svd(b).singular_values(0) : 0.0);
  cert.target_residual = std::abs(y.dot(b * x));
  check(cert, "|<Bx, y>|", *cert.target_residual, kAnnihilatorThreshold * scale);
  return cert;
}

double extreme_structure_residual(const ExtremePoint& point, const NormPlugin& plugin) {
  const RealVector sigma = svd(point.matrix).singular_values;
  switch (point.kind) {
    case ExtremeKind::ScaledUnitary: {
      const auto* kyfan = dynamic_cast<const KyFanNorm*>(&plugin);
      if (kyfan == nullptr) return std::numeric_limits<double>::infinity();
      const double level = 1.0 / static_cast<double>(kyfan->k());
      return (sigma.array() - level).abs().maxCoeff();
    }
    case ExtremeKind::RankOneDyad: {
      const double tail = sigma.size() > 1 ? sigma(1) : 0.0;
      return std::max(std::abs(sigma(0) - 1.0), tail);
    }
    case ExtremeKind::SpherePoint:
      return 0.0;
  }
  return std::numeric_limits<double>::infinity();
}

Certificate certify_extreme(const ComplexMatrix& b, const ExtremePoint& point, Complex w, const NormPlugin& plugin) {
  Certificate cert;
  cert.construction = "extreme_point";
  if (b.rows() != point.matrix.cols() || b.cols() != point.matrix.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "certify_extreme: dimension mismatch");
  }
  cert.norm_residual = std::abs(plugin.norm(point.matrix) - 1.0);
  check(cert, "norm residual", *cert.norm_residual, kNormThreshold);
  cert.structure_residual = extreme_structure_residual(point, plugin);
  check(cert, "structure residual", *cert.structure_residual, kNormThreshold);
  cert.target_residual = std::abs(trace_of_product(b, point.matrix) - w);
  check(cert, "target residual", *cert.target_residual, kTargetThreshold);
  return cert;
}

Certificate certify_projection(const NormalState& state, const LazyProjection& q, double t,
                               const LazyProjection* outer) {
  Certificate cert;
  cert.construction = outer != nullptr ? "sub_projection" : "finite_rank_projection";
  const ProjectionValue value = projection_apply(state, q);
  cert.error_bound = state.tail_mass();
  cert.target_residual = std::abs(value.value - t);
  check(cert, "projection value residual", *cert.target_residual, state.tail_mass() + kProjectionSlack);
  cert.orthonormality_residual = frame_orthonormality_residual(q);
  check(cert, "frame orthonormality residual", *cert.orthonormality_residual, kFrameThreshold);
  if (q.rank().is_infinite()) cert.failures.push_back("projection rank is not finite");
  if (outer != nullptr) {
    cert.containment_residual = containment_residual(*outer, q);
    check(cert, "containment residual", *cert.containment_residual, kContainmentThreshold);
  }
  return cert;
}

Certificate certify_ladder(const NormalState& state, const std::vector<LazyProjection>& ladder) {
  Certificate cert;
  cert.construction = "dyadic_ladder";
  cert.error_bound = state.tail_mass();
  double worst_value = 0.0;
  double worst_nesting = 0.0;
  double worst_frame = 0.0;
  for (std::size_t j = 0; j < ladder.size(); ++j) {
    const double level = static_cast<double>(j + 1);
    const double expected = std::ldexp(1.0, -static_cast<int>(j + 1));
    const double residual = std::abs(projection_apply(state, ladder[j]).value - expected);
    worst_value = std::max(worst_value, residual);
    check(cert, ("level " + std::to_string(j + 1) + " value residual").c_str(), residual,
          level * (state.tail_mass() + kProjectionSlack));
    worst_frame = std::max(worst_frame, frame_orthonormality_residual(ladder[j]));
    if (j > 0) {
      const double nesting = containment_residual(ladder[j - 1], ladder[j]);
      worst_nesting = std::max(worst_nesting, nesting);
      check(cert, ("level " + std::to_string(j + 1) + " nesting residual").c_str(), nesting, kContainmentThreshold);
    }
  }
  cert.target_residual = worst_value;
  cert.containment_residual = worst_nesting;
  cert.orthonormality_residual = worst_frame;
  check(cert, "frame orthonormality residual", worst_frame, kFrameThreshold);
  return cert;
}

Certificate certify_average(const std::vector<Complex>& points, Complex w) {
  Certificate cert;
  cert.construction = "commutative_average";
  if (points.empty()) {
    cert.failures.push_back("no points");
    return cert;
  }
  Complex mean(0.0, 0.0);
  double modulus = 0.0;
  for (const auto& z : points) {
    mean += z;
    modulus = std::max(modulus, std::abs(std::abs(z) - 1.0));
  }
  mean /= static_cast<double>(points.size());
  cert.norm_residual = modulus;
  check(cert, "unit modulus residual", modulus, kAverageThreshold);
  cert.target_residual = std::abs(mean - w);
  check(cert, "mean residual", *cert.target_residual, kAverageThreshold);
  return cert;
}

}  // namespace ncavg

#include "ncavg/extreme.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "ncavg/root_find.hpp"

namespace ncavg {

namespace {

constexpr double kNormalizationTolerance = 1e-9;

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": matrix must be square and non-empty");
  }
}

void require_k(Index k, Index n, const char* what) {
  if (k < 1 || k > n) throw Error(ErrorCode::BadK, std::string(what) + ": k must lie in [1, n]");
}

void require_p(double p, const char* what) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::BadP, std::string(what) + ": need 1 < p < inf");
}

std::vector<double> sorted_magnitudes(const RealVector& values) {
  std::vector<double> out(static_cast<std::size_t>(values.size()));
  for (Index i = 0; i < values.size(); ++i) out[static_cast<std::size_t>(i)] = std::abs(values(i));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double power_sum_root(const RealVector& values, double p) {
  const double scale = values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double total = 0.0;
  for (Index i = 0; i < values.size(); ++i) total += std::pow(std::abs(values(i)) / scale, p);
  return scale * std::pow(total, 1.0 / p);
}

std::string format_number(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace

const char* to_string(ExtremeKind kind) noexcept {
  switch (kind) {
    case ExtremeKind::ScaledUnitary: return "scaled_unitary";
    case ExtremeKind::RankOneDyad: return "rank_one_dyad";
    case ExtremeKind::SpherePoint: return "sphere_point";
  }
  return "unknown";
}

ExtremeKind extreme_kind_from_string(std::string_view name) {
  if (name == "scaled_unitary") return ExtremeKind::ScaledUnitary;
  if (name == "rank_one_dyad") return ExtremeKind::RankOneDyad;
  if (name == "sphere_point") return ExtremeKind::SpherePoint;
  throw Error(ErrorCode::InvalidArgument, "unknown extreme point kind '" + std::string(name) + "'");
}

KyFanNorm::KyFanNorm(Index k) : k_(k) {
  if (k < 1) throw Error(ErrorCode::BadK, "KyFanNorm: k must be positive");
}

std::string KyFanNorm::id() const { return "kyfan:" + std::to_string(k_); }

double KyFanNorm::gauge(const RealVector& singular_values) const {
  require_k(k_, singular_values.size(), "KyFanNorm");
  const auto sorted = sorted_magnitudes(singular_values);
  double total = 0.0;
  for (Index j = 0; j < k_; ++j) total += sorted[static_cast<std::size_t>(j)];
  return total;
}

double KyFanNorm::dual_gauge(const RealVector& singular_values) const {
  require_k(k_, singular_values.size(), "KyFanNorm");
  const double sum = singular_values.cwiseAbs().sum();
  return std::max(singular_values.cwiseAbs().maxCoeff(), sum / static_cast<double>(k_));
}

ExtremePoint KyFanNorm::attainer(const ComplexMatrix& b) const {
  return kyfan_extreme_solve(b, k_, DiskTarget(Complex(1.0, 0.0)));
}

SchattenNorm::SchattenNorm(double p) : p_(p) { require_p(p, "SchattenNorm"); }

std::string SchattenNorm::id() const { return "schatten:" + format_number(p_); }

double SchattenNorm::gauge(const RealVector& singular_values) const {
  return power_sum_root(singular_values, p_);
}

double SchattenNorm::dual_gauge(const RealVector& singular_values) const {
  return power_sum_root(singular_values, conjugate_exponent());
}

ExtremePoint SchattenNorm::attainer(const ComplexMatrix& b) const { return schatten_attainer(b, p_); }

std::unique_ptr<NormPlugin> make_norm_plugin(std::string_view id) {
  const auto colon = id.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument, "norm id must look like kyfan:k or schatten:p");
  }
  const std::string_view family = id.substr(0, colon);
  const std::string_view argument = id.substr(colon + 1);
  if (family == "kyfan") {
    long long k = 0;
    const auto [ptr, ec] = std::from_chars(argument.data(), argument.data() + argument.size(), k);
    if (ec != std::errc() || ptr != argument.data() + argument.size()) {
      throw Error(ErrorCode::BadK, "kyfan: k must be an integer");
    }
    return std::make_unique<KyFanNorm>(static_cast<Index>(k));
  }
  if (family == "schatten") {
    double p = 0.0;
    const auto [ptr, ec] = std::from_chars(argument.data(), argument.data() + argument.size(), p);
    if (ec != std::errc() || ptr != argument.data() + argument.size()) {
      throw Error(ErrorCode::BadP, "schatten: p must be a number");
    }
    return std::make_unique<SchattenNorm>(p);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown norm family '" + std::string(family) + "'");
}

double kyfan_norm(const ComplexMatrix& x, Index k) {
  require_k(k, std::min(x.rows(), x.cols()), "kyfan_norm");
  return svd(x).singular_values.head(k).sum();
}

double kyfan_dual_norm(const ComplexMatrix& b, Index k) {
  require_k(k, std::min(b.rows(), b.cols()), "kyfan_dual_norm");
  const RealVector sigma = svd(b).singular_values;
  return std::max(sigma(0), sigma.sum() / static_cast<double>(k));
}

double schatten_norm(const ComplexMatrix& x, double p) {
  require_p(p, "schatten_norm");
  return power_sum_root(svd(x).singular_values, p);
}

ExtremePoint kyfan_extreme_solve(const ComplexMatrix& b, Index k, DiskTarget w) {
  require_square(b, "kyfan_extreme_solve");
  const Index n = b.rows();
  require_k(k, n, "kyfan_extreme_solve");
  const auto f = svd(b);
  const double sigma1 = f.singular_values(0);
  const double trace_norm = f.singular_values.sum();
  const double per_k = trace_norm / static_cast<double>(k);
  if (std::abs(std::max(sigma1, per_k) - 1.0) > kNormalizationTolerance) {
    throw Error(ErrorCode::NotNormalized, "kyfan_extreme_solve: Ky-Fan dual norm of B differs from one");
  }

  const bool scaled_unitary = (k < n || n == 1) && per_k >= sigma1 - 1e-12;
  ExtremePoint point;
  point.norm_id = "kyfan:" + std::to_string(k);
  if (scaled_unitary) {
    // tr(B X0/k) = tr|B| * (k w / tr|B|) / k = w.
    const Complex inner_target = w.value() * static_cast<double>(k) / trace_norm;
    const Complex clamped = std::abs(inner_target) > 1.0 ? inner_target / std::abs(inner_target) : inner_target;
    const ComplexMatrix x0 = solve_functional_unitary(normalize_functional(b), DiskTarget(clamped));
    point.kind = ExtremeKind::ScaledUnitary;
    point.matrix = x0 / static_cast<double>(k);
    return point;
  }

  // B x1 = sigma1 y1; y = e^{-i arg w}(cos t y1 + sin t y_perp) gives
  // tr(B x1 y^*) = y^* B x1 = e^{i arg w} cos t sigma1.
  const ComplexVector x1 = f.right.col(0);
  const ComplexVector y1 = f.left.col(0);
  ComplexVector y_perp = f.left.col(1);
  for (int pass = 0; pass < 2; ++pass) y_perp -= y1 * y1.dot(y_perp);
  y_perp.normalize();
  const double cosine = std::min(w.modulus() / sigma1, 1.0);
  const double sine = std::sqrt(std::max(0.0, 1.0 - cosine * cosine));
  const ComplexVector y = std::polar(1.0, -w.argument()) * (cosine * y1 + sine * y_perp);
  point.kind = ExtremeKind::RankOneDyad;
  point.matrix = x1 * y.adjoint();
  return point;
}

ExtremePoint schatten_attainer(const ComplexMatrix& b, double p) {
  require_p(p, "schatten_attainer");
  require_square(b, "schatten_attainer");
  const double q = p / (p - 1.0);
  const auto f = svd(b);
  const double dual = power_sum_root(f.singular_values, q);
  if (dual <= 1e-14) throw Error(ErrorCode::ZeroFunctional, "schatten_attainer: B vanishes");
  if (std::abs(dual - 1.0) > kNormalizationTolerance) {
    throw Error(ErrorCode::NotNormalized, "schatten_attainer: Schatten dual norm of B differs from one");
  }
  // Hoelder equality: d_j = sigma_j^{q-1} / |sigma|_q^{q-1}.
  RealVector d(f.singular_values.size());
  for (Index j = 0; j < d.size(); ++j) {
    d(j) = std::pow(f.singular_values(j) / dual, q - 1.0);
  }
  d /= power_sum_root(d, p);
  SchattenNorm norm(p);
  return {ExtremeKind::SpherePoint, f.right * d.cast<Complex>().asDiagonal() * f.left.adjoint(), norm.id()};
}

ExtremePoint general_extreme_solve(const ComplexMatrix& b, const NormPlugin& plugin, DiskTarget w) {
  require_square(b, "general_extreme_solve");
  if (std::abs(plugin.dual_norm(b) - 1.0) > kNormalizationTolerance) {
    throw Error(ErrorCode::NotNormalized, "general_extreme_solve: dual norm of B differs from one");
  }
  ExtremePoint start = plugin.attainer(b);

  // psi(Y) = tr(B Y A0) = tr(C Y) with C = A0 B and tr C = 1.
  const ComplexMatrix c = start.matrix * b;
  ComplexMatrix u0 = ComplexMatrix::Identity(b.rows(), b.cols());
  if (b.rows() == 1) {
    // Only scalars of modulus one: the attainer is the whole ball boundary.
    if (w.modulus() < 1.0 - 1e-12) {
      throw Error(ErrorCode::DimensionTooSmall, "general_extreme_solve: n = 1 only reaches the unit circle");
    }
  } else {
    u0 = solve_functional_unitary(normalize_functional(c), DiskTarget(Complex(0.0, 0.0)));
  }
  const auto spectrum = unitary_spectrum(u0);
  const ComplexVector coefficients = (spectrum.basis.adjoint() * c * spectrum.basis).diagonal();
  auto value_at = [&](double s) {
    Complex total(0.0, 0.0);
    for (Index j = 0; j < coefficients.size(); ++j) {
      total += coefficients(j) * std::polar(1.0, s * spectrum.phases(j));
    }
    return total;
  };

  CrossingOptions options;
  options.endpoint_slack = 1e-9;
  const double s_star =
      smallest_crossing([&](double s) { return std::abs(value_at(s)); }, w.modulus(), options);
  const Complex reached = value_at(s_star);
  const double beta = w.value() == Complex(0.0, 0.0) ? 0.0 : w.argument() - arg_or_zero(reached);

  ExtremePoint point;
  point.kind = start.kind;
  point.norm_id = plugin.id();
  point.matrix = std::polar(1.0, beta) * spectrum.along_path(s_star) * start.matrix;
  return point;
}

}  // namespace ncavg

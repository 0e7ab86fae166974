#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "ncavg/linalg.hpp"
#include "ncavg/unitary_disk.hpp"

namespace ncavg {

enum class ExtremeKind { ScaledUnitary, RankOneDyad, SpherePoint };

const char* to_string(ExtremeKind kind) noexcept;
ExtremeKind extreme_kind_from_string(std::string_view name);

/// Extreme point of a unitarily invariant norm ball, tagged by its family.
struct ExtremePoint {
  ExtremeKind kind;
  ComplexMatrix matrix;
  std::string norm_id;
};

/// A unitarily invariant norm given by its symmetric gauge on singular values,
/// together with the dual gauge and an attainer: for B of dual norm one, an
/// extreme point A0 with tr(B A0) = 1.
class NormPlugin {
 public:
  virtual ~NormPlugin() = default;

  virtual std::string id() const = 0;
  virtual double gauge(const RealVector& singular_values) const = 0;
  virtual double dual_gauge(const RealVector& singular_values) const = 0;
  virtual ExtremePoint attainer(const ComplexMatrix& b) const = 0;

  double norm(const ComplexMatrix& x) const { return gauge(svd(x).singular_values); }
  double dual_norm(const ComplexMatrix& b) const { return dual_gauge(svd(b).singular_values); }
};

class KyFanNorm final : public NormPlugin {
 public:
  explicit KyFanNorm(Index k);

  Index k() const { return k_; }
  std::string id() const override;
  double gauge(const RealVector& singular_values) const override;
  double dual_gauge(const RealVector& singular_values) const override;
  ExtremePoint attainer(const ComplexMatrix& b) const override;

 private:
  Index k_;
};

class SchattenNorm final : public NormPlugin {
 public:
  /// 1 < p < infinity.
  explicit SchattenNorm(double p);

  double p() const { return p_; }
  double conjugate_exponent() const { return p_ / (p_ - 1.0); }
  std::string id() const override;
  double gauge(const RealVector& singular_values) const override;
  double dual_gauge(const RealVector& singular_values) const override;
  ExtremePoint attainer(const ComplexMatrix& b) const override;

 private:
  double p_;
};

/// Parses "kyfan:k" or "schatten:p".
std::unique_ptr<NormPlugin> make_norm_plugin(std::string_view id);

double kyfan_norm(const ComplexMatrix& x, Index k);

/// sup |tr(B E)| over the extreme points of the Ky-Fan k ball:
/// max(sigma_1(B), tr|B| / k).
double kyfan_dual_norm(const ComplexMatrix& b, Index k);

double schatten_norm(const ComplexMatrix& x, double p);

/// Extreme point E of the Ky-Fan k ball with tr(B E) = w, for B of Ky-Fan
/// dual norm one. Picks the scaled-unitary family when tr|B|/k >= sigma_1
/// (ties included) and the rank-one family otherwise; k = n always takes the
/// rank-one family since U/n is not extreme for the trace norm.
ExtremePoint kyfan_extreme_solve(const ComplexMatrix& b, Index k, DiskTarget w);

/// Hoelder-equality attainer for the Schatten p norm.
ExtremePoint schatten_attainer(const ComplexMatrix& b, double p);

/// Extreme point E = e^{i beta} gamma(s) A0 on the unitary orbit of the
/// plugin's attainer A0 with tr(B E) = w.
ExtremePoint general_extreme_solve(const ComplexMatrix& b, const NormPlugin& plugin, DiskTarget w);

}  // namespace ncavg

#include "ncavg/unitary_disk.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ncavg/root_find.hpp"

namespace ncavg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWeightTolerance = 1e-10;
constexpr double kDiskSlack = 1e-12;

double principal_phase(double theta) {
  double r = std::remainder(theta, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

void require_weights(const RealVector& weights, const char* what) {
  if (weights.size() < 1) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": empty weight vector");
  if (!weights.allFinite() || weights.minCoeff() < -kWeightTolerance ||
      std::abs(weights.sum() - 1.0) > kWeightTolerance) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + ": weights must be non-negative and sum to one");
  }
}

// Columns (e_{2j} + sign e_{2j+1}) / sqrt(2), j < n/2.
ComplexMatrix paired_frame(Index n, double sign) {
  ComplexMatrix frame = ComplexMatrix::Zero(n, n / 2);
  for (Index j = 0; j < n / 2; ++j) {
    frame(2 * j, j) = kInvSqrt2;
    frame(2 * j + 1, j) = sign * kInvSqrt2;
  }
  return frame;
}

}  // namespace

DiskTarget::DiskTarget(Complex w) : value_(w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
    throw Error(ErrorCode::InvalidArgument, "DiskTarget: non-finite target");
  }
  if (std::abs(w) > 1.0 + kDiskSlack) {
    throw Error(ErrorCode::TargetOutsideDisk, "DiskTarget: |w| exceeds one");
  }
}

double DiskTarget::modulus() const { return std::min(std::abs(value_), 1.0); }

SpectralUnitary::SpectralUnitary(std::vector<double> phases, std::vector<ComplexMatrix> frames,
                                 double global_phase)
    : phases_(std::move(phases)), frames_(std::move(frames)), global_phase_(global_phase) {
  if (phases_.empty() || phases_.size() != frames_.size() || phases_.size() > kMaxEigenvalues) {
    throw Error(ErrorCode::InvalidArgument, "SpectralUnitary: need one to three (phase, frame) pairs");
  }
  const Index n = frames_.front().rows();
  Index columns = 0;
  for (const auto& f : frames_) {
    if (f.rows() != n) throw Error(ErrorCode::DimensionMismatch, "SpectralUnitary: frame row mismatch");
    columns += f.cols();
  }
  if (n < 1 || columns != n) {
    throw Error(ErrorCode::DimensionMismatch, "SpectralUnitary: frames must partition the space");
  }
  ComplexMatrix stacked(n, n);
  Index offset = 0;
  for (const auto& f : frames_) {
    stacked.middleCols(offset, f.cols()) = f;
    offset += f.cols();
  }
  if (unitarity_residual(stacked) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "SpectralUnitary: frames are not mutually orthonormal");
  }
}

ComplexMatrix SpectralUnitary::matrix() const {
  const Index n = dimension();
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  for (std::size_t j = 0; j < phases_.size(); ++j) {
    u += std::polar(1.0, phases_[j]) * (frames_[j] * frames_[j].adjoint());
  }
  return std::polar(1.0, global_phase_) * u;
}

SpectralUnitary SpectralUnitary::conjugated_by(const ComplexMatrix& v) const {
  std::vector<ComplexMatrix> frames;
  frames.reserve(frames_.size());
  for (const auto& f : frames_) frames.push_back(v * f);
  return SpectralUnitary(phases_, std::move(frames), global_phase_);
}

SpectralUnitary SpectralUnitary::along_path(double s) const {
  std::vector<double> phases;
  phases.reserve(phases_.size());
  for (double theta : phases_) phases.push_back(s * theta);
  return SpectralUnitary(std::move(phases), frames_, 0.0);
}

SpectralUnitary SpectralUnitary::rotated(double beta) const {
  return SpectralUnitary(phases_, frames_, global_phase_ + beta);
}

SpectralUnitary SpectralUnitary::with_folded_phase() const {
  std::vector<double> phases;
  phases.reserve(phases_.size());
  for (double theta : phases_) phases.push_back(principal_phase(theta + global_phase_));
  return SpectralUnitary(std::move(phases), frames_, 0.0);
}

SpectralUnitary even_zero_unitary(Index n) {
  if (n % 2 != 0) throw Error(ErrorCode::OddDimension, "even_zero_unitary: n must be even");
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "even_zero_unitary: n must be at least 2");
  return SpectralUnitary({0.0, kPi}, {paired_frame(n, 1.0), paired_frame(n, -1.0)});
}

SpectralUnitary even_disk_unitary(const RealVector& weights, DiskTarget w) {
  const Index n = weights.size();
  if (n % 2 != 0) throw Error(ErrorCode::OddDimension, "even_disk_unitary: weight count must be even");
  require_weights(weights, "even_disk_unitary");

  // Every diagonal entry of P + e^{i pi t}(I - P) is (1 + e^{i pi t}) / 2,
  // of modulus cos(pi t / 2), whatever the weights are.
  const double r = w.modulus();
  const double t_star = 2.0 / kPi * std::acos(r);
  const double alpha = w.value() == Complex(0.0, 0.0) ? 0.0 : w.argument() - kPi * t_star / 2.0;
  return SpectralUnitary({0.0, kPi * t_star}, {paired_frame(n, 1.0), paired_frame(n, -1.0)}, alpha);
}

SpectralUnitary odd_zero_unitary(const RealVector& weights) {
  const Index n = weights.size();
  if (n % 2 == 0) throw Error(ErrorCode::EvenDimension, "odd_zero_unitary: weight count must be odd");
  if (n < 3) throw Error(ErrorCode::DimensionTooSmall, "odd_zero_unitary: n must be at least 3");
  require_weights(weights, "odd_zero_unitary");
  for (Index j = 0; j + 1 < n; ++j) {
    if (weights(j + 1) > weights(j) + kWeightTolerance) {
      throw Error(ErrorCode::InvalidArgument, "odd_zero_unitary: weights must be sorted descending");
    }
  }

  // The smallest weight is at most 1/n < 1/2, so the sub-target lies inside the disk.
  const double last = std::max(weights(n - 1), 0.0);
  const RealVector head = weights.head(n - 1) / (1.0 - last);
  const auto inner = even_disk_unitary(head / head.sum(), DiskTarget(Complex(-last / (1.0 - last), 0.0)))
                         .with_folded_phase();

  std::vector<double> phases = inner.phases();
  std::vector<ComplexMatrix> frames;
  for (const auto& f : inner.frames()) {
    ComplexMatrix padded = ComplexMatrix::Zero(n, f.cols());
    padded.topRows(n - 1) = f;
    frames.push_back(std::move(padded));
  }
  phases.push_back(0.0);
  ComplexMatrix fixed = ComplexMatrix::Zero(n, 1);
  fixed(n - 1, 0) = 1.0;
  frames.push_back(std::move(fixed));
  return SpectralUnitary(std::move(phases), std::move(frames));
}

SpectralUnitary solve_state_unitary(const DensityState& state, DiskTarget w) {
  const Index n = state.dimension();
  if (n == 1) {
    if (std::abs(w.value()) < 1.0 - kDiskSlack) {
      throw Error(ErrorCode::DimensionTooSmall, "solve_state_unitary: n = 1 only reaches the unit circle");
    }
    return SpectralUnitary({0.0}, {ComplexMatrix::Identity(1, 1)}, w.argument());
  }
  if (n % 2 == 0) {
    return even_disk_unitary(state.weights(), w).conjugated_by(state.frame());
  }

  const auto zero = odd_zero_unitary(state.weights()).with_folded_phase();
  std::vector<double> masses;
  for (const auto& f : zero.frames()) {
    masses.push_back(state.weights().dot(f.rowwise().squaredNorm()));
  }
  const auto& phases = zero.phases();
  auto value_at = [&](double s) {
    Complex total(0.0, 0.0);
    for (std::size_t j = 0; j < phases.size(); ++j) total += masses[j] * std::polar(1.0, s * phases[j]);
    return total;
  };
  const double s_star = smallest_crossing([&](double s) { return std::abs(value_at(s)); }, w.modulus());
  const double beta = w.value() == Complex(0.0, 0.0) ? 0.0 : w.argument() - arg_or_zero(value_at(s_star));
  return zero.along_path(s_star).rotated(beta).conjugated_by(state.frame());
}

ComplexMatrix solve_functional_unitary(const TraceFunctional& functional, DiskTarget w) {
  // B = U_p |B|, so tr(B V U_p^*) = tr(|B| V).
  const auto polar = polar_decompose(functional.matrix());
  const DensityState modulus(polar.modulus);
  const ComplexMatrix v = solve_state_unitary(modulus, w).matrix();
  return v * polar.unitary.adjoint();
}

RankOneDyad rank_one_annihilator(const ComplexMatrix& b) {
  if (b.rows() < 1 || b.rows() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "rank_one_annihilator: matrix must be square");
  }
  const Index n = b.rows();
  if (n == 1) {
    if (std::abs(b(0, 0)) > 1e-14) {
      throw Error(ErrorCode::DimensionTooSmall, "rank_one_annihilator: no annihilating dyad for n = 1");
    }
    return {ComplexVector::Ones(1), ComplexVector::Ones(1)};
  }
  const auto f = svd(b);
  RankOneDyad dyad;
  dyad.x = f.right.col(0);
  const ComplexVector image = b * dyad.x;
  const double image_norm = image.norm();
  if (image_norm <= 1e-14) {
    dyad.y = f.right.col(1);
    return dyad;
  }
  const ComplexVector u = image / image_norm;
  ComplexVector y = f.left.col(1);
  for (int pass = 0; pass < 2; ++pass) y -= u * u.dot(y);
  dyad.y = y / y.norm();
  return dyad;
}

RankOneDyad rank_one_annihilator(const TraceFunctional& functional) {
  return rank_one_annihilator(functional.matrix());
}

std::vector<Complex> commutative_average(Index n, DiskTarget w) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "commutative_average: n must be positive");
  const Complex rotation = std::polar(1.0, w.argument());
  if (n == 1) {
    if (std::abs(w.value()) < 1.0 - kDiskSlack) {
      throw Error(ErrorCode::Infeasible, "commutative_average: one point only averages to the circle");
    }
    return {rotation};
  }
  const double r = w.modulus();
  std::vector<Complex> points;
  points.reserve(static_cast<std::size_t>(n));
  double cosine = r;
  if (n % 2 != 0) {
    points.push_back(rotation);
    cosine = (static_cast<double>(n) * r - 1.0) / static_cast<double>(n - 1);
  }
  const double theta = std::acos(std::clamp(cosine, -1.0, 1.0));
  while (static_cast<Index>(points.size()) < n) {
    points.push_back(rotation * std::polar(1.0, theta));
    points.push_back(rotation * std::polar(1.0, -theta));
  }
  return points;
}

}  // namespace ncavg

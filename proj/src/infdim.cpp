#include "ncavg/infdim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ncavg {

namespace {

constexpr double kMassTolerance = 1e-12;
constexpr double kFrameTolerance = 1e-10;

ComplexMatrix pad_rows(const ComplexMatrix& m, Index rows) {
  if (m.rows() >= rows) return m;
  ComplexMatrix out = ComplexMatrix::Zero(rows, m.cols());
  out.topRows(m.rows()) = m;
  return out;
}

ComplexVector pad(const ComplexVector& v, Index size) {
  if (v.size() >= size) return v;
  ComplexVector out = ComplexVector::Zero(size);
  out.head(v.size()) = v;
  return out;
}

ComplexVector block_vector(std::size_t start, std::size_t block, std::size_t length) {
  ComplexVector v = ComplexVector::Zero(static_cast<Index>(length));
  const double entry = 1.0 / std::sqrt(static_cast<double>(block));
  for (std::size_t i = start; i < start + block; ++i) v(static_cast<Index>(i)) = entry;
  return v;
}

// Stored density restricted to the first `window` basis vectors.
RealVector stored_diagonal(const NormalState& state, std::size_t window) {
  RealVector d(static_cast<Index>(window));
  for (std::size_t i = 0; i < window; ++i) d(static_cast<Index>(i)) = state.eigenvalue(i);
  return d;
}

// Eigenbasis G of the stored state compressed to the frame of P, with its
// weights in descending order.
struct Compression {
  ComplexMatrix basis;
  RealVector weights;
};

Compression compress(const NormalState& state, const ComplexMatrix& frame) {
  Compression out;
  if (frame.cols() == 0) {
    out.basis = frame;
    out.weights = RealVector(0);
    return out;
  }
  const RealVector diag = stored_diagonal(state, static_cast<std::size_t>(frame.rows()));
  const ComplexMatrix m = frame.adjoint() * diag.cast<Complex>().asDiagonal() * frame;
  auto eig = hermitian_eig(ComplexMatrix((m + m.adjoint()) / 2.0));
  out.basis = frame * eig.eigenvectors;
  out.weights = eig.eigenvalues.cwiseMax(0.0);
  return out;
}

// Halves the stored mass of Q by pairing consecutive vectors of its
// diagonalized compression; the tail is halved by doubling its block size.
LazyProjection halve_within(const NormalState& state, const LazyProjection& q) {
  if (!q.tail()) {
    throw Error(ErrorCode::UnreachableTarget, "halve_within: projection has no zero-mass tail to pair with");
  }
  LazyProjection work = q.absorb_tail_below(state.prefix_length());
  while (work.frame().cols() % 2 != 0 || work.frame().cols() == 0) {
    work = work.absorb_tail_below(work.tail()->start + 1);
  }
  const Compression c = compress(state, work.frame());
  const Index pairs = c.basis.cols() / 2;
  ComplexMatrix frame(c.basis.rows(), pairs);
  for (Index j = 0; j < pairs; ++j) {
    frame.col(j) = (c.basis.col(2 * j) + c.basis.col(2 * j + 1)) * kInvSqrt2;
  }
  const BlockTail tail{work.tail()->start, 2 * work.tail()->block};
  return LazyProjection(std::move(frame), tail);
}

}  // namespace

NormalState::NormalState(RealVector eigenvalues, double tail_mass)
    : eigenvalues_(std::move(eigenvalues)), tail_mass_(tail_mass), next_fresh_(0) {
  if (!eigenvalues_.allFinite() || !std::isfinite(tail_mass_)) {
    throw Error(ErrorCode::InvalidArgument, "NormalState: non-finite entry");
  }
  for (Index j = 0; j < eigenvalues_.size(); ++j) {
    if (eigenvalues_(j) < 0.0) throw Error(ErrorCode::NotDensity, "NormalState: negative eigenvalue");
    if (j > 0 && eigenvalues_(j) > eigenvalues_(j - 1)) {
      throw Error(ErrorCode::InvalidArgument, "NormalState: eigenvalues must be sorted descending");
    }
  }
  if (tail_mass_ < -kMassTolerance) throw Error(ErrorCode::NotDensity, "NormalState: negative tail mass");
  tail_mass_ = std::max(tail_mass_, 0.0);
  if (std::abs(eigenvalues_.sum() + tail_mass_ - 1.0) > kMassTolerance) {
    throw Error(ErrorCode::NotDensity, "NormalState: eigenvalues and tail mass must sum to one");
  }
  next_fresh_ = prefix_length();
}

NormalState NormalState::from_prefix(RealVector eigenvalues) {
  const double tail = 1.0 - eigenvalues.sum();
  return NormalState(std::move(eigenvalues), tail);
}

NormalState::NormalState(const NormalState& other)
    : eigenvalues_(other.eigenvalues_), tail_mass_(other.tail_mass_), next_fresh_(other.next_fresh_.load()) {}

NormalState& NormalState::operator=(const NormalState& other) {
  eigenvalues_ = other.eigenvalues_;
  tail_mass_ = other.tail_mass_;
  next_fresh_ = other.next_fresh_.load();
  return *this;
}

double NormalState::eigenvalue(std::size_t index) const {
  return index < prefix_length() ? eigenvalues_(static_cast<Index>(index)) : 0.0;
}

std::size_t NormalState::allocate_fresh_index() const { return next_fresh_.fetch_add(1); }

LazyProjection::LazyProjection(ComplexMatrix frame, std::optional<BlockTail> tail)
    : frame_(std::move(frame)), tail_(tail) {
  if (tail_) {
    if (tail_->block < 1) throw Error(ErrorCode::InvalidArgument, "LazyProjection: tail block must be positive");
    if (tail_->start < window()) {
      throw Error(ErrorCode::InvalidArgument, "LazyProjection: tail must start past the frame window");
    }
  }
  if (!frame_.allFinite()) throw Error(ErrorCode::InvalidArgument, "LazyProjection: non-finite frame entry");
  if (frame_orthonormality_residual(*this) > kFrameTolerance) {
    throw Error(ErrorCode::InvalidArgument, "LazyProjection: frame is not orthonormal");
  }
}

LazyProjection LazyProjection::span_of_basis(const std::vector<std::size_t>& indices) {
  std::size_t window = 0;
  for (auto i : indices) window = std::max(window, i + 1);
  ComplexMatrix frame = ComplexMatrix::Zero(static_cast<Index>(window), static_cast<Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) {
    frame(static_cast<Index>(indices[c]), static_cast<Index>(c)) = 1.0;
  }
  return LazyProjection(std::move(frame));
}

LazyProjection LazyProjection::cofinite_excluding(const std::vector<std::size_t>& excluded,
                                                  const ComplexMatrix& frame) {
  std::size_t start = static_cast<std::size_t>(frame.rows());
  for (auto i : excluded) start = std::max(start, i + 1);
  std::vector<bool> is_excluded(start, false);
  for (auto i : excluded) is_excluded[i] = true;
  for (Index row = 0; row < frame.rows(); ++row) {
    if (!is_excluded[static_cast<std::size_t>(row)] && frame.row(row).norm() > 1e-12) {
      throw Error(ErrorCode::InvalidArgument, "cofinite_excluding: frame must live on excluded indices");
    }
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < start; ++i)
    if (!is_excluded[i]) kept.push_back(i);
  ComplexMatrix full = ComplexMatrix::Zero(static_cast<Index>(start), frame.cols() + static_cast<Index>(kept.size()));
  full.topLeftCorner(frame.rows(), frame.cols()) = frame;
  for (std::size_t c = 0; c < kept.size(); ++c) {
    full(static_cast<Index>(kept[c]), frame.cols() + static_cast<Index>(c)) = 1.0;
  }
  return LazyProjection(std::move(full), BlockTail{start, 1});
}

ExtendedDim LazyProjection::rank() const {
  if (tail_) return ExtendedDim::infinite();
  return ExtendedDim::finite(static_cast<std::size_t>(frame_.cols()));
}

ExtendedDim LazyProjection::corank() const {
  if (!tail_ || tail_->block > 1) return ExtendedDim::infinite();
  return ExtendedDim::finite(tail_->start - static_cast<std::size_t>(frame_.cols()));
}

ComplexVector LazyProjection::apply(const ComplexVector& x) const {
  std::size_t length = std::max(static_cast<std::size_t>(x.size()), window());
  if (tail_ && length > tail_->start) {
    const std::size_t blocks = (length - tail_->start + tail_->block - 1) / tail_->block;
    length = tail_->start + blocks * tail_->block;
  }
  const ComplexVector xx = pad(x, static_cast<Index>(length));
  const ComplexMatrix f = pad_rows(frame_, static_cast<Index>(length));
  ComplexVector y = f * (f.adjoint() * xx);
  if (tail_) {
    for (std::size_t s = tail_->start; s < length; s += tail_->block) {
      const ComplexVector b = block_vector(s, tail_->block, length);
      y += b * b.dot(xx);
    }
  }
  return y;
}

ComplexMatrix LazyProjection::materialize(std::size_t requested) const {
  std::size_t length = std::max(requested, window());
  if (tail_ && length > tail_->start) {
    const std::size_t blocks = (length - tail_->start + tail_->block - 1) / tail_->block;
    length = tail_->start + blocks * tail_->block;
  }
  const ComplexMatrix f = pad_rows(frame_, static_cast<Index>(length));
  ComplexMatrix p = f * f.adjoint();
  if (tail_) {
    for (std::size_t s = tail_->start; s < length; s += tail_->block) {
      const ComplexVector b = block_vector(s, tail_->block, length);
      p += b * b.adjoint();
    }
  }
  return p;
}

LazyProjection LazyProjection::absorb_tail_below(std::size_t index) const {
  if (!tail_ || tail_->start >= index) return *this;
  std::size_t start = tail_->start;
  const std::size_t block = tail_->block;
  std::vector<std::size_t> starts;
  while (start < index) {
    starts.push_back(start);
    start += block;
  }
  ComplexMatrix frame = pad_rows(frame_, static_cast<Index>(start));
  frame.conservativeResize(Eigen::NoChange, frame.cols() + static_cast<Index>(starts.size()));
  for (std::size_t c = 0; c < starts.size(); ++c) {
    frame.col(frame_.cols() + static_cast<Index>(c)) = block_vector(starts[c], block, start);
  }
  return LazyProjection(std::move(frame), BlockTail{start, block});
}

ProjectionValue projection_apply(const NormalState& state, const LazyProjection& p) {
  const std::size_t prefix = state.prefix_length();
  const ComplexMatrix& f = p.frame();
  double value = 0.0;
  bool touches_tail = false;
  for (Index row = 0; row < f.rows(); ++row) {
    const double weight = f.row(row).squaredNorm();
    if (static_cast<std::size_t>(row) < prefix) {
      value += state.eigenvalue(static_cast<std::size_t>(row)) * weight;
    } else if (weight > 0.0) {
      touches_tail = true;
    }
  }
  if (const auto& tail = p.tail()) {
    touches_tail = true;
    for (std::size_t k = tail->start; k < prefix; ++k) {
      value += state.eigenvalue(k) / static_cast<double>(tail->block);
    }
  }
  return {value, touches_tail ? state.tail_mass() : 0.0};
}

bool unitary_equivalent(const LazyProjection& p, const LazyProjection& q) {
  return p.rank() == q.rank() && p.corank() == q.corank();
}

LazyProjection half_projection(const NormalState& state) {
  return halve_within(state, LazyProjection::identity());
}

LazyProjection finite_rank_projection_solve(const NormalState& state, double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorCode::UnreachableTarget, "finite_rank_projection_solve: target must lie in [0, 1)");
  }
  if (t >= 1.0 - state.tail_mass()) {
    throw Error(ErrorCode::UnreachableTarget,
                "finite_rank_projection_solve: target needs more mass than the stored prefix holds");
  }
  const RealVector& lambda = state.eigenvalues();
  // k = max{k : C_k <= t}, C_k the k-th partial sum.
  Index k = 0;
  double partial = 0.0;
  while (k < lambda.size() && partial + lambda(k) <= t) partial += lambda(k++);
  if (t - partial <= 0.0 || k == lambda.size()) {
    std::vector<std::size_t> indices(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    return LazyProjection::span_of_basis(indices);
  }

  // t - C_k < lambda_k, so cos^2 = (t - C_k) / lambda_k lies in (0, 1).
  const double cos2 = (t - partial) / lambda(k);
  const std::size_t fresh = state.allocate_fresh_index();
  const Index window = static_cast<Index>(std::max<std::size_t>(fresh + 1, static_cast<std::size_t>(k + 1)));
  ComplexMatrix frame = ComplexMatrix::Zero(window, k + 1);
  for (Index j = 0; j < k; ++j) frame(j, j) = 1.0;
  frame(k, k) = std::sqrt(cos2);
  frame(static_cast<Index>(fresh), k) = std::sqrt(1.0 - cos2);
  return LazyProjection(std::move(frame));
}

std::vector<LazyProjection> dyadic_ladder(const NormalState& state, std::size_t depth) {
  if (depth > kMaxLadderDepth) {
    throw Error(ErrorCode::DepthTooLarge, "dyadic_ladder: depth exceeds " + std::to_string(kMaxLadderDepth));
  }
  std::vector<LazyProjection> ladder;
  ladder.reserve(depth);
  for (std::size_t level = 0; level < depth; ++level) {
    ladder.push_back(level == 0 ? half_projection(state) : halve_within(state, ladder.back()));
  }
  return ladder;
}

LazyProjection divisibility_solve(const NormalState& state, const LazyProjection& p, double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorCode::UnreachableTarget, "divisibility_solve: target must be non-negative");
  }
  if (t == 0.0) return LazyProjection::zero();
  const ProjectionValue available = projection_apply(state, p);
  if (available.value <= state.tail_mass()) {
    throw Error(ErrorCode::EmptyProjection, "divisibility_solve: phi(P) is within the tail uncertainty");
  }
  if (t > available.value) {
    throw Error(ErrorCode::UnreachableTarget, "divisibility_solve: target exceeds the stored value of phi(P)");
  }

  LazyProjection work = p.absorb_tail_below(state.prefix_length());
  const Compression c = compress(state, work.frame());
  const Index r = c.weights.size();
  Index k = 0;
  double partial = 0.0;
  while (k < r && partial + c.weights(k) <= t) partial += c.weights(k++);
  if (t - partial <= 1e-14 || k == r) {
    return LazyProjection(ComplexMatrix(c.basis.leftCols(k)));
  }

  // Partner direction inside P with less mass than the remainder t - C_k.
  ComplexVector partner;
  double partner_mass = 0.0;
  ComplexMatrix basis = c.basis;
  if (work.tail()) {
    const BlockTail tail = *work.tail();
    const std::size_t end = tail.start + tail.block;
    basis = pad_rows(basis, static_cast<Index>(end));
    partner = block_vector(tail.start, tail.block, end);
  } else if (k + 1 < r && c.weights(r - 1) <= t - partial) {
    partner = c.basis.col(r - 1);
    partner_mass = c.weights(r - 1);
  } else {
    throw Error(ErrorCode::UnreachableTarget, "divisibility_solve: finite-rank P has no room for this target");
  }

  const double cos2 = std::clamp((t - partial - partner_mass) / (c.weights(k) - partner_mass), 0.0, 1.0);
  ComplexMatrix frame(basis.rows(), k + 1);
  frame.leftCols(k) = basis.leftCols(k);
  frame.col(k) = std::sqrt(cos2) * basis.col(k) + std::sqrt(1.0 - cos2) * pad(partner, basis.rows());
  return LazyProjection(std::move(frame));
}

double containment_residual(const LazyProjection& outer, const LazyProjection& inner) {
  if (const auto& tail = inner.tail()) {
    const auto& host = outer.tail();
    if (!host || tail->start < host->start || (tail->start - host->start) % host->block != 0 ||
        tail->block % host->block != 0) {
      return 1.0;
    }
  }
  double residual2 = 0.0;
  const ComplexMatrix& f = inner.frame();
  for (Index c = 0; c < f.cols(); ++c) {
    const ComplexVector x = f.col(c);
    const ComplexVector px = outer.apply(x);
    residual2 += (pad(x, px.size()) - px).squaredNorm();
  }
  return std::sqrt(residual2);
}

double frame_orthonormality_residual(const LazyProjection& p) {
  const ComplexMatrix& f = p.frame();
  return (f.adjoint() * f - ComplexMatrix::Identity(f.cols(), f.cols())).norm();
}

ComplexMatrix reflection_unitary(const LazyProjection& p, std::size_t window) {
  const ComplexMatrix projection = p.materialize(window);
  return 2.0 * projection - ComplexMatrix::Identity(projection.rows(), projection.cols());
}

ProjectionValue reflection_value(const NormalState& state, const LazyProjection& p) {
  const ProjectionValue v = projection_apply(state, p);
  return {2.0 * v.value - 1.0, 2.0 * v.error_bound};
}

}  // namespace ncavg

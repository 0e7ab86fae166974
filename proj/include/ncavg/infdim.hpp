#pragma once

// Normal states and projections on an infinite-dimensional separable Hilbert
// space with orthonormal basis {v_0, v_1, ...}, the eigenbasis of the state's
// density operator.
//
// A NormalState stores a finite prefix of its eigenvalues and the mass left
// in the tail. Basis vectors past the prefix carry zero stored mass, so every
// value computed here is exact for the stored prefix and off by at most the
// tail mass for the true state. Non-normal states (for instance states lifted
// from the Calkin algebra, which vanish on every finite-rank projection) have
// no such representation and are out of reach here.

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "ncavg/linalg.hpp"

namespace ncavg {

/// A dimension that is either a finite count or countably infinite.
class ExtendedDim {
 public:
  static ExtendedDim finite(std::size_t count) { return ExtendedDim(false, count); }
  static ExtendedDim infinite() { return ExtendedDim(true, 0); }

  bool is_infinite() const { return infinite_; }
  std::size_t count() const { return count_; }
  std::string to_string() const { return infinite_ ? "infinite" : std::to_string(count_); }

  friend bool operator==(const ExtendedDim&, const ExtendedDim&) = default;

 private:
  ExtendedDim(bool infinite, std::size_t count) : infinite_(infinite), count_(count) {}
  bool infinite_;
  std::size_t count_;
};

class NormalState {
 public:
  /// Eigenvalues descending and non-negative; sum plus tail mass must be one
  /// within 1e-12.
  NormalState(RealVector eigenvalues, double tail_mass);
  /// Tail mass taken as 1 - sum(eigenvalues).
  static NormalState from_prefix(RealVector eigenvalues);

  NormalState(const NormalState& other);
  NormalState& operator=(const NormalState& other);

  const RealVector& eigenvalues() const { return eigenvalues_; }
  double tail_mass() const { return tail_mass_; }
  std::size_t prefix_length() const { return static_cast<std::size_t>(eigenvalues_.size()); }
  /// Stored eigenvalue at a basis index; zero past the prefix.
  double eigenvalue(std::size_t index) const;
  /// Index of a basis vector past the prefix that no earlier call returned.
  std::size_t allocate_fresh_index() const;

 private:
  RealVector eigenvalues_;
  double tail_mass_;
  mutable std::atomic<std::size_t> next_fresh_;
};

/// span{ (v_{s + b i} + ... + v_{s + b i + b - 1}) / sqrt(b) : i >= 0 } with
/// s = start and b = block. block = 1 is the cofinite tail {v_i : i >= start}.
struct BlockTail {
  std::size_t start = 0;
  std::size_t block = 1;

  friend bool operator==(const BlockTail&, const BlockTail&) = default;
};

/// Orthogonal projection = (span of an orthonormal frame over basis indices
/// [0, window)) + (optional block tail starting at or after window).
class LazyProjection {
 public:
  /// The zero projection.
  LazyProjection() = default;
  explicit LazyProjection(ComplexMatrix frame, std::optional<BlockTail> tail = std::nullopt);

  static LazyProjection zero() { return {}; }
  static LazyProjection identity() { return LazyProjection(ComplexMatrix(0, 0), BlockTail{0, 1}); }
  static LazyProjection span_of_basis(const std::vector<std::size_t>& indices);
  /// Frame columns (supported inside `excluded`) plus every basis vector
  /// whose index is not excluded.
  static LazyProjection cofinite_excluding(const std::vector<std::size_t>& excluded,
                                           const ComplexMatrix& frame = ComplexMatrix(0, 0));

  const ComplexMatrix& frame() const { return frame_; }
  std::size_t window() const { return static_cast<std::size_t>(frame_.rows()); }
  const std::optional<BlockTail>& tail() const { return tail_; }

  ExtendedDim rank() const;
  ExtendedDim corank() const;

  /// P x for x supported on [0, x.size()); the result may be longer when a
  /// tail block straddles the end of x.
  ComplexVector apply(const ComplexVector& x) const;
  /// Dense matrix of P on the first `window` basis vectors, rounded up so no
  /// tail block is cut.
  ComplexMatrix materialize(std::size_t window) const;
  /// Moves tail blocks that start below `index` into the frame.
  LazyProjection absorb_tail_below(std::size_t index) const;

 private:
  ComplexMatrix frame_ = ComplexMatrix(0, 0);
  std::optional<BlockTail> tail_;
};

struct ProjectionValue {
  double value;        // stored-prefix value
  double error_bound;  // true value lies in [value, value + error_bound]
};

ProjectionValue projection_apply(const NormalState& state, const LazyProjection& p);

/// Equal rank and equal corank.
bool unitary_equivalent(const LazyProjection& p, const LazyProjection& q);

/// P with phi(P) = 1/2 and P unitarily equivalent to I - P, by pairing
/// consecutive eigenvectors at 45 degrees.
LazyProjection half_projection(const NormalState& state);

/// Finite-rank P with phi(P) = t for 0 <= t < 1 - tail mass.
LazyProjection finite_rank_projection_solve(const NormalState& state, double t);

inline constexpr std::size_t kMaxLadderDepth = 16;

/// Nested projections Q_1 >= ... >= Q_m with phi(Q_j) = 2^{-j}.
std::vector<LazyProjection> dyadic_ladder(const NormalState& state, std::size_t depth);

/// Q <= P with phi(Q) = t, for 0 <= t <= stored phi(P).
LazyProjection divisibility_solve(const NormalState& state, const LazyProjection& p, double t);

/// ||(I - P) Q||_F over Q's frame, or 1 when Q's tail is not inside P.
double containment_residual(const LazyProjection& outer, const LazyProjection& inner);

/// ||F^* F - I||_F of the frame.
double frame_orthonormality_residual(const LazyProjection& p);

/// The reflection 2P - I; it lies in ker(phi) when phi(P) = 1/2.
ComplexMatrix reflection_unitary(const LazyProjection& p, std::size_t window);
ProjectionValue reflection_value(const NormalState& state, const LazyProjection& p);

}  // namespace ncavg

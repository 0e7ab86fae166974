#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ncavg/state.hpp"

namespace ncavg {

/// How random unitaries are drawn for the range of a state:
///  - Haar: U Haar-distributed on U(n);
///  - Diagonal: U diagonal in the eigenbasis of A with independent uniform
///    phases (the commutative subalgebra);
///  - Projection: e^{i beta}(2P - I) with P a Haar-rotated coordinate
///    projection of uniform rank and beta uniform.
enum class Sampler { Haar, Diagonal, Projection };

Sampler sampler_from_string(std::string_view name);

/// N values phi(U); worker w draws its share from seed + w and outputs are
/// concatenated in worker order, so the result only depends on (N, seed,
/// workers).
std::vector<Complex> sample_range(const DensityState& state, Sampler sampler, std::size_t samples,
                                  std::uint64_t seed, std::size_t workers = 1);

struct CoverageStats {
  std::size_t samples = 0;
  std::size_t grid = 64;
  double radius = 0.99;
  std::size_t disk_cells = 0;  // cells lying entirely inside |z| <= radius
  std::size_t hit_cells = 0;
  double coverage = 0.0;
  double min_modulus = 0.0;
  double max_modulus = 0.0;
};

/// Fraction of grid x grid cells over [-1, 1]^2 that lie inside |z| <= radius
/// and contain at least one sample.
CoverageStats coverage_stats(const std::vector<Complex>& points, std::size_t grid = 64, double radius = 0.99);

/// Best approach to |w| by unitaries with at most two eigenvalues.
struct TwoEigenvalueSearch {
  double best_residual;  // min over the grid of | |phi(U)| - |w| |
  std::size_t best_rank;
  double best_split;  // phi(P) for U = z1 P + z2 (I - P)
  double best_phase_gap;
  std::size_t evaluated;
};

/// Grid search over U = z1 P + z2 (I - P): |phi(U)| = |p + (1 - p) e^{i d}|
/// with p = phi(P) ranging over [sum of the r smallest weights, sum of the r
/// largest] for rank r, and d the phase gap. Global phase is free, so only
/// |w| matters.
TwoEigenvalueSearch two_eigenvalue_search(const DensityState& state, Complex w, std::size_t split_points = 100,
                                          std::size_t phase_points = 100);

}  // namespace ncavg

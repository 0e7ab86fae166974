#include "ncavg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

namespace ncavg {

namespace {

Complex draw(const DensityState& state, Sampler sampler, std::mt19937_64& gen) {
  const Index n = state.dimension();
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  switch (sampler) {
    case Sampler::Haar:
      return state_apply(state, haar_unitary(n, gen));
    case Sampler::Diagonal: {
      Complex total(0.0, 0.0);
      for (Index j = 0; j < n; ++j) total += state.weights()(j) * std::polar(1.0, angle(gen));
      return total;
    }
    case Sampler::Projection: {
      std::uniform_int_distribution<Index> rank(0, n);
      const Index r = rank(gen);
      const ComplexMatrix q = haar_unitary(n, gen).leftCols(r);
      const double value = (q.adjoint() * state.matrix() * q).trace().real();
      return std::polar(1.0, angle(gen)) * (2.0 * value - 1.0);
    }
  }
  return {};
}

}  // namespace

Sampler sampler_from_string(std::string_view name) {
  if (name == "haar") return Sampler::Haar;
  if (name == "diagonal") return Sampler::Diagonal;
  if (name == "projection") return Sampler::Projection;
  throw Error(ErrorCode::InvalidArgument, "unknown sampler '" + std::string(name) + "'");
}

std::vector<Complex> sample_range(const DensityState& state, Sampler sampler, std::size_t samples,
                                  std::uint64_t seed, std::size_t workers) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "sample_range: need at least one sample");
  workers = std::clamp<std::size_t>(workers, 1, samples);
  std::vector<std::vector<Complex>> shards(workers);
  auto run = [&](std::size_t w) {
    const std::size_t share = samples / workers + (w < samples % workers ? 1 : 0);
    std::mt19937_64 gen(seed + w);
    shards[w].reserve(share);
    for (std::size_t i = 0; i < share; ++i) shards[w].push_back(draw(state, sampler, gen));
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  std::vector<Complex> out;
  out.reserve(samples);
  for (auto& shard : shards) out.insert(out.end(), shard.begin(), shard.end());
  return out;
}

CoverageStats coverage_stats(const std::vector<Complex>& points, std::size_t grid, double radius) {
  CoverageStats stats;
  stats.samples = points.size();
  stats.grid = grid;
  stats.radius = radius;
  const double h = 2.0 / static_cast<double>(grid);
  std::vector<char> hit(grid * grid, 0);
  stats.min_modulus = std::numeric_limits<double>::infinity();
  for (const auto& z : points) {
    stats.min_modulus = std::min(stats.min_modulus, std::abs(z));
    stats.max_modulus = std::max(stats.max_modulus, std::abs(z));
    const auto cell = [&](double x) {
      const auto i = static_cast<long long>(std::floor((x + 1.0) / h));
      return static_cast<std::size_t>(std::clamp<long long>(i, 0, static_cast<long long>(grid) - 1));
    };
    hit[cell(z.real()) * grid + cell(z.imag())] = 1;
  }
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      const double x0 = -1.0 + h * static_cast<double>(i);
      const double y0 = -1.0 + h * static_cast<double>(j);
      const double far_x = std::max(std::abs(x0), std::abs(x0 + h));
      const double far_y = std::max(std::abs(y0), std::abs(y0 + h));
      if (std::hypot(far_x, far_y) > radius) continue;
      ++stats.disk_cells;
      if (hit[i * grid + j] != 0) ++stats.hit_cells;
    }
  }
  stats.coverage =
      stats.disk_cells > 0 ? static_cast<double>(stats.hit_cells) / static_cast<double>(stats.disk_cells) : 0.0;
  return stats;
}

TwoEigenvalueSearch two_eigenvalue_search(const DensityState& state, Complex w, std::size_t split_points,
                                          std::size_t phase_points) {
  const Index n = state.dimension();
  const RealVector& c = state.weights();  // descending
  const double level = std::min(std::abs(w), 1.0);
  TwoEigenvalueSearch best{std::numeric_limits<double>::infinity(), 0, 0.0, 0.0, 0};
  split_points = std::max<std::size_t>(split_points, 1);
  phase_points = std::max<std::size_t>(phase_points, 1);
  for (Index r = 1; r < n; ++r) {
    const double hi = c.head(r).sum();
    const double lo = c.tail(r).sum();
    for (std::size_t i = 0; i < split_points; ++i) {
      const double p =
          split_points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(split_points - 1);
      for (std::size_t k = 0; k < phase_points; ++k) {
        const double gap = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(phase_points);
        const double residual = std::abs(std::abs(p + (1.0 - p) * std::polar(1.0, gap)) - level);
        ++best.evaluated;
        if (residual < best.best_residual) {
          best.best_residual = residual;
          best.best_rank = static_cast<std::size_t>(r);
          best.best_split = p;
          best.best_phase_gap = gap;
        }
      }
    }
  }
  return best;
}

}  // namespace ncavg

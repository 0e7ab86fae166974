#pragma once

#include <functional>

namespace ncavg {

struct CrossingOptions {
  int grid_points = 256;
  int max_iterations = 200;
  double residual = 1e-12;
  /// Accept s = 1 when g(1) overshoots the level by at most this much.
  double endpoint_slack = 0.0;
};

/// Smallest s in [0, 1] with g(s) = level, for continuous g with
/// g(0) >= level >= g(1). A uniform grid locates the first bracketing
/// interval, then bisection refines it until |g(s) - level| <= residual.
/// Throws ConvergenceFailure when the endpoints do not bracket or the
/// iteration budget runs out.
double smallest_crossing(const std::function<double(double)>& g, double level,
                         const CrossingOptions& options = {});

}  // namespace ncavg

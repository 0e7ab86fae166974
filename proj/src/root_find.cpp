#include "ncavg/root_find.hpp"

#include <cmath>

#include "ncavg/errors.hpp"

namespace ncavg {

double smallest_crossing(const std::function<double(double)>& g, double level,
                         const CrossingOptions& options) {
  const double at_start = g(0.0);
  if (std::abs(at_start - level) <= options.residual || level >= at_start) return 0.0;
  const double at_end = g(1.0);
  if (std::abs(at_end - level) <= options.residual && level <= at_end) return 1.0;
  if (at_end > level) {
    if (at_end - level <= options.endpoint_slack) return 1.0;
    throw Error(ErrorCode::ConvergenceFailure, "smallest_crossing: endpoints do not bracket the level");
  }

  // First grid cell [lo, hi] with g(lo) > level >= g(hi).
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 1; i <= options.grid_points; ++i) {
    const double s = static_cast<double>(i) / options.grid_points;
    const double value = g(s);
    if (std::abs(value - level) <= options.residual) return s;
    if (value < level) {
      hi = s;
      break;
    }
    lo = s;
  }

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double value = g(mid);
    if (std::abs(value - level) <= options.residual) return mid;
    if (value > level) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (!(lo < 0.5 * (lo + hi) && 0.5 * (lo + hi) < hi)) break;
  }
  throw Error(ErrorCode::ConvergenceFailure, "smallest_crossing: bisection budget exhausted");
}

}  // namespace ncavg

// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "ncavg/certificate.hpp"
#include "ncavg/extreme.hpp"
#include "ncavg/infdim.hpp"
#include "ncavg/sampler.hpp"
#include "ncavg/unitary_disk.hpp"
#include "test_support.hpp"

namespace ncavg {
namespace {

using testing::ginibre;
using testing::random_disk_point;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* format, auto... values) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), format, values...);
  return buffer;
}

Outcome state_unitaries() {
  std::mt19937_64 gen(1001);
  std::uniform_int_distribution<Index> dim(2, 12);
  const auto start = std::chrono::steady_clock::now();
  double worst_unitary = 0.0;
  double worst_target = 0.0;
  int budget_violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = dim(gen);
    const Index rank = trial % 5 == 0 ? 1 + trial % n : n;
    const DensityState s(testing::random_density(n, gen, rank));
    Complex w = random_disk_point(gen);
    if (trial % 25 == 0) w = std::polar(1.0, std::arg(w));
    const ComplexMatrix u = solve_state_unitary(s, DiskTarget(w)).matrix();
    const Certificate cert = certify_state_unitary(s.matrix(), u, w, 1e-7);
    worst_unitary = std::max(worst_unitary, *cert.unitarity_residual);
    worst_target = std::max(worst_target, *cert.target_residual);
    if (!cert.eigenphase_clusters || *cert.eigenphase_clusters > (n % 2 == 0 ? 2u : 3u)) ++budget_violations;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = worst_unitary <= 1e-9 && worst_target <= 1e-8 && budget_violations == 0 && seconds < 10.0;
  return {ok, fmt("500 pairs, max unitarity %.2e, max target %.2e, budget violations %d, %.2f s", worst_unitary,
                  worst_target, budget_violations, seconds)};
}

Outcome flat_m3_needs_three_eigenvalues() {
  const DensityState s(ComplexMatrix::Identity(3, 3) / 3.0);
  const ComplexMatrix u = solve_state_unitary(s, DiskTarget(Complex(0.0, 0.0))).matrix();
  const std::size_t clusters = eigenphase_clusters(u, 1e-7);
  const double value = std::abs((s.matrix() * u).trace());
  const TwoEigenvalueSearch search = two_eigenvalue_search(s, Complex(0.0, 0.0), 100, 100);
  const bool ok = clusters == 3 && value <= 1e-8 && search.evaluated >= 10000 && search.best_residual > 1e-3;
  return {ok, fmt("solver clusters %zu, |tr(AU)| %.1e; %zu two-eigenvalue candidates, min |tr(AU)| %.4f", clusters,
                  value, search.evaluated, search.best_residual)};
}

Outcome functional_unitaries() {
  std::mt19937_64 gen(1003);
  std::uniform_int_distribution<Index> dim(2, 10);
  double worst_unitary = 0.0;
  double worst_target = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = dim(gen);
    const TraceFunctional f = normalize_functional(ginibre(n, n, gen));
    const Complex w = random_disk_point(gen);
    const ComplexMatrix x = solve_functional_unitary(f, DiskTarget(w));
    const Certificate cert = certify_functional_unitary(f.matrix(), x, w);
    worst_unitary = std::max(worst_unitary, *cert.unitarity_residual);
    worst_target = std::max(worst_target, *cert.target_residual);
  }
  return {worst_unitary <= 1e-9 && worst_target <= 1e-8,
          fmt("200 functionals, max unitarity %.2e, max target %.2e", worst_unitary, worst_target)};
}

Outcome rank_one_annihilators() {
  std::mt19937_64 gen(1004);
  std::uniform_int_distribution<Index> dim(2, 12);
  double worst = 0.0;
  double worst_norm = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = dim(gen);
    const ComplexMatrix b = ginibre(n, n, gen);
    const RankOneDyad d = rank_one_annihilator(b);
    worst = std::max(worst, std::abs(d.y.dot(b * d.x)));
    worst_norm = std::max({worst_norm, std::abs(d.x.norm() - 1.0), std::abs(d.y.norm() - 1.0)});
  }
  return {worst <= 1e-12 && worst_norm <= 1e-12,
          fmt("200 functionals, max |<Bx, y>| %.2e, max unit-norm defect %.2e", worst, worst_norm)};
}

Outcome kyfan_dual_soundness() {
  std::mt19937_64 gen(1005);
  std::uniform_int_distribution<Index> dim(1, 8);
  double worst_excess = -1.0;
  double worst_attainer = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = dim(gen);
    const ComplexMatrix b = ginibre(n, n, gen);
    const Eigen::VectorXd sigma = Eigen::JacobiSVD<ComplexMatrix>(b).singularValues();
    // 10^4 extreme points per functional: half unitaries (scaled by 1/k per
    // k below), half unit dyads.
    double best_unitary = 0.0;
    double best_dyad = 0.0;
    for (int sample = 0; sample < 5000; ++sample) {
      best_unitary = std::max(best_unitary, std::abs((b * haar_unitary(n, gen)).trace()));
      const ComplexVector x = ginibre(n, 1, gen).col(0).normalized();
      const ComplexVector y = ginibre(n, 1, gen).col(0).normalized();
      best_dyad = std::max(best_dyad, std::abs(y.dot(b * x)));
    }
    for (Index k = 1; k <= n; ++k) {
      const double bound = std::max(sigma(0), sigma.sum() / static_cast<double>(k));
      const double sampled = std::max(best_unitary / static_cast<double>(k), best_dyad);
      worst_excess = std::max(worst_excess, sampled - bound);
      const ExtremePoint e = KyFanNorm(k).attainer(b / bound);
      worst_attainer = std::max(worst_attainer, std::abs(std::abs((b * e.matrix).trace()) - bound));
    }
  }
  return {worst_excess <= 1e-9 && worst_attainer <= 1e-9,
          fmt("50 functionals, max sampled excess over bound %.2e, max attainer gap %.2e", worst_excess,
              worst_attainer)};
}

Outcome extreme_points() {
  std::mt19937_64 gen(1006);
  std::uniform_int_distribution<Index> dim(2, 8);
  int failures = 0;
  double worst_target = 0.0;
  double worst_structure = 0.0;
  int runs = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = dim(gen);
    std::uniform_int_distribution<Index> pick_k(1, n);
    const ComplexMatrix raw = ginibre(n, n, gen);
    for (const std::string id : {"kyfan:" + std::to_string(pick_k(gen)), std::string("schatten:2"),
                                 std::string("schatten:3")}) {
      const auto plugin = make_norm_plugin(id);
      const ComplexMatrix b = raw / plugin->dual_norm(raw);
      const Complex w = random_disk_point(gen);
      const auto* kyfan = dynamic_cast<const KyFanNorm*>(plugin.get());
      const ExtremePoint e = kyfan != nullptr ? kyfan_extreme_solve(b, kyfan->k(), DiskTarget(w))
                                              : general_extreme_solve(b, *plugin, DiskTarget(w));
      const Certificate cert = certify_extreme(b, e, w, *plugin);
      if (!cert.passed()) ++failures;
      worst_target = std::max(worst_target, *cert.target_residual);
      worst_structure = std::max({worst_structure, *cert.structure_residual, *cert.norm_residual});
      ++runs;
    }
  }
  return {failures == 0 && worst_target <= 1e-8,
          fmt("%d solves, certificate failures %d, max target %.2e, max norm/structure %.2e", runs, failures,
              worst_target, worst_structure)};
}

NormalState make_state(const std::string& family) {
  const Index length = 64;
  RealVector v = RealVector::Zero(length);
  double eps = 0.0;
  if (family == "geometric") {
    for (Index j = 0; j < length; ++j) v(j) = std::ldexp(1.0, -static_cast<int>(j + 1));
    eps = 1.0 - v.sum();
  } else if (family == "zipf") {
    for (Index j = 0; j < length; ++j) v(j) = 1.0 / std::pow(static_cast<double>(j + 1), 2.0);
    eps = 1e-6;
    v *= (1.0 - eps) / v.sum();
  } else {
    v.head(5) << 0.4, 0.25, 0.2, 0.1, 0.05;
  }
  return NormalState(v, eps);
}

Outcome normal_state_projections() {
  int failures = 0;
  double worst_value = 0.0;
  double worst_frame = 0.0;
  double worst_nesting = 0.0;
  double max_eps = 0.0;
  for (const char* family : {"geometric", "zipf", "finite_rank"}) {
    const NormalState s = make_state(family);
    max_eps = std::max(max_eps, s.tail_mass());
    const LazyProjection half = half_projection(s);
    for (int j = 0; j < 128; ++j) {
      const double t = j / 128.0;
      for (int variant = 0; variant < 3; ++variant) {
        if (variant == 2 && t > 0.5 - s.tail_mass()) continue;
        const LazyProjection q = variant == 0   ? finite_rank_projection_solve(s, t)
                                 : variant == 1 ? divisibility_solve(s, LazyProjection::identity(), t)
                                                : divisibility_solve(s, half, t);
        const Certificate cert = certify_projection(s, q, t, variant == 2 ? &half : nullptr);
        if (!cert.passed()) ++failures;
        worst_value = std::max(worst_value, *cert.target_residual);
        worst_frame = std::max(worst_frame, *cert.orthonormality_residual);
        if (cert.containment_residual) worst_nesting = std::max(worst_nesting, *cert.containment_residual);
      }
    }
    const auto ladder = dyadic_ladder(s, 10);
    const Certificate cert = certify_ladder(s, ladder);
    if (!cert.passed() || ladder.size() != 10) ++failures;
    worst_nesting = std::max(worst_nesting, *cert.containment_residual);
    worst_frame = std::max(worst_frame, *cert.orthonormality_residual);
  }
  return {failures == 0,
          fmt("3 states (eps <= %.1e), 128 targets, depth-10 ladders: failures %d, max |phi(P)-t| %.2e, "
              "max frame %.2e, max nesting %.2e",
              max_eps, failures, worst_value, worst_frame, worst_nesting)};
}

Outcome disk_coverage() {
  const DensityState s(Eigen::Vector2d(0.3, 0.7).cast<Complex>().asDiagonal().toDenseMatrix());
  const CoverageStats haar = coverage_stats(sample_range(s, Sampler::Haar, 100000, 20240601));
  const CoverageStats diagonal = coverage_stats(sample_range(s, Sampler::Diagonal, 100000, 20240601));
  const bool ok = haar.coverage >= 0.99 && diagonal.min_modulus >= 0.4 - 1e-9;
  return {ok, fmt("haar coverage %.4f of %zu cells; diagonal min |z| %.9f", haar.coverage, haar.disk_cells,
                  diagonal.min_modulus)};
}

Outcome commutative_averages() {
  std::mt19937_64 gen(1009);
  double worst = 0.0;
  int failures = 0;
  for (Index n = 2; n <= 10; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const Complex w = random_disk_point(gen);
      const Certificate cert = certify_average(commutative_average(n, DiskTarget(w)), w);
      if (!cert.passed()) ++failures;
      worst = std::max({worst, *cert.target_residual, *cert.norm_residual});
    }
  }
  bool rejects = false;
  try {
    commutative_average(1, DiskTarget(Complex(0.5, 0.0)));
  } catch (const Error& e) {
    rejects = e.code() == ErrorCode::Infeasible;
  }
  return {failures == 0 && rejects,
          fmt("900 targets, max residual %.2e, n = 1 interior target %s", worst, rejects ? "rejected" : "accepted")};
}

}  // namespace
}  // namespace ncavg

int main() {
  using ncavg::Outcome;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"state unitaries with eigenvalue budget", ncavg::state_unitaries},
      {"normalized trace on M3 needs three eigenvalues", ncavg::flat_m3_needs_three_eigenvalues},
      {"functional unitaries via polar decomposition", ncavg::functional_unitaries},
      {"rank-one annihilators", ncavg::rank_one_annihilators},
      {"Ky Fan dual-norm soundness", ncavg::kyfan_dual_soundness},
      {"extreme points for Ky Fan and Schatten balls", ncavg::extreme_points},
      {"finite-rank projections and dyadic ladders", ncavg::normal_state_projections},
      {"Monte Carlo disk coverage and annulus", ncavg::disk_coverage},
      {"commutative averages", ncavg::commutative_averages},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome outcome{false, ""};
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.passed) ++failed;
    std::printf("%s criterion %d: %s: %s\n", outcome.passed ? "PASS" : "FAIL", index, name, outcome.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed;
}

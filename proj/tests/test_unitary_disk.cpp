#include <gtest/gtest.h>

#include "ncavg/certificate.hpp"
#include "ncavg/root_find.hpp"
#include "ncavg/unitary_disk.hpp"
#include "test_support.hpp"

namespace ncavg {
namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

ComplexMatrix diagonal(std::initializer_list<double> values) {
  const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(values.begin(), static_cast<Index>(values.size()));
  return d.cast<Complex>().asDiagonal();
}

TEST(RootFind, SmallestCrossingOfMonotoneAndBumpyFunctions) {
  const double s = smallest_crossing([](double x) { return 1.0 - x; }, 0.25);
  EXPECT_NEAR(s, 0.75, 1e-12);
  // Crosses 0.5 three times; the first crossing is the answer.
  const auto g = [](double x) { return 0.5 + 0.5 * std::cos(3.0 * M_PI * x); };
  EXPECT_NEAR(smallest_crossing(g, 0.5), 1.0 / 6.0, 1e-10);
  EXPECT_EQ(smallest_crossing([](double) { return 0.3; }, 0.4), 0.0);
  EXPECT_EQ(code_of([] { smallest_crossing([](double) { return 1.0; }, 0.5); }), ErrorCode::ConvergenceFailure);
}

TEST(DiskTarget, RejectsOutsideDisk) {
  EXPECT_EQ(code_of([] { DiskTarget(Complex(2.0, 0.0)); }), ErrorCode::TargetOutsideDisk);
  EXPECT_NO_THROW(DiskTarget(Complex(0.6, 0.8)));
}

TEST(EvenZeroUnitary, TwoEigenvaluesAndZeroDiagonal) {
  for (Index n : {2, 4, 10}) {
    const SpectralUnitary u = even_zero_unitary(n);
    const ComplexMatrix m = u.matrix();
    EXPECT_EQ(u.eigenvalue_count(), 2u);
    EXPECT_LE(unitarity_residual(m), 1e-14);
    EXPECT_LE(m.diagonal().norm(), 1e-14);
  }
  EXPECT_EQ(code_of([] { even_zero_unitary(3); }), ErrorCode::OddDimension);
}

TEST(EvenDiskUnitary, WeightIndependentAndExact) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 * (1 + trial % 5);
    const DensityState s(testing::random_density(n, gen));
    const Complex w = testing::random_disk_point(gen);
    const SpectralUnitary u = even_disk_unitary(s.weights(), DiskTarget(w));
    const ComplexMatrix m = u.matrix();
    const Complex value = (s.weights().cast<Complex>().asDiagonal() * m).trace();
    ASSERT_LE(std::abs(value - w), 1e-12) << "trial " << trial;
    // The diagonal of U is w itself in every entry, so any weights give w.
    ASSERT_LE((m.diagonal().array() - w).abs().maxCoeff(), 1e-12);
    ASSERT_LE(eigenphase_clusters(m), 2u);
  }
}

TEST(OddZeroUnitary, NormalizedTraceOnM3HasThreeEigenvalues) {
  const Eigen::Vector3d c = Eigen::Vector3d::Constant(1.0 / 3.0);
  const SpectralUnitary u = odd_zero_unitary(c);
  const ComplexMatrix m = u.matrix();
  EXPECT_LE(std::abs(m.trace()), 1e-12);
  EXPECT_EQ(eigenphase_clusters(m), 3u);
  EXPECT_EQ(code_of([] { odd_zero_unitary(Eigen::Vector4d::Constant(0.25)); }), ErrorCode::EvenDimension);
}

TEST(SolveStateUnitary, HalfHalfAtZeroIsSwapLike) {
  const DensityState s(diagonal({0.5, 0.5}));
  const ComplexMatrix u = solve_state_unitary(s, DiskTarget(Complex(0.0, 0.0))).matrix();
  EXPECT_LE(std::abs((s.matrix() * u).trace()), 1e-14);
  EXPECT_LE(u.diagonal().norm(), 1e-14);
}

TEST(SolveStateUnitary, PureStateReachesTarget) {
  const DensityState s(diagonal({1.0, 0.0, 0.0}));
  const Complex w(0.2, -0.3);
  const ComplexMatrix u = solve_state_unitary(s, DiskTarget(w)).matrix();
  const Certificate cert = certify_state_unitary(s.matrix(), u, w);
  EXPECT_TRUE(cert.passed()) << (cert.failures.empty() ? "" : cert.failures.front());
}

TEST(SolveStateUnitary, OneDimensional) {
  const DensityState s(ComplexMatrix::Identity(1, 1));
  EXPECT_EQ(code_of([&] { solve_state_unitary(s, DiskTarget(Complex(0.5, 0.0))); }), ErrorCode::DimensionTooSmall);
  const ComplexMatrix u = solve_state_unitary(s, DiskTarget(Complex(0.0, 1.0))).matrix();
  EXPECT_LE(std::abs(u(0, 0) - Complex(0.0, 1.0)), 1e-14);
}

TEST(SolveStateUnitary, RandomStatesMeetCertificate) {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 2 + trial % 9;
    const Index rank = trial % 4 == 0 ? 1 + trial % n : n;
    const DensityState s(testing::random_density(n, gen, rank));
    Complex w = testing::random_disk_point(gen);
    if (trial % 10 == 0) w = std::polar(1.0, std::arg(w));  // boundary targets
    const SpectralUnitary su = solve_state_unitary(s, DiskTarget(w));
    EXPECT_LE(su.eigenvalue_count(), n % 2 == 0 ? 2u : 3u);
    const Certificate cert = certify_state_unitary(s.matrix(), su.matrix(), w);
    ASSERT_TRUE(cert.passed()) << "trial " << trial << ": " << cert.failures.front();
  }
}

TEST(SolveStateUnitary, RotationEquivariance) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + trial % 6;
    const DensityState s(testing::random_density(n, gen));
    const ComplexMatrix v = haar_unitary(n, gen);
    const Complex w = testing::random_disk_point(gen);
    const ComplexMatrix u = solve_state_unitary(s.rotated(v), DiskTarget(w)).matrix();
    // tr(V A V* U) = tr(A V* U V): the pulled-back unitary works for A.
    const ComplexMatrix pulled = v.adjoint() * u * v;
    EXPECT_LE(std::abs((s.matrix() * pulled).trace() - w), 1e-8);
  }
}

TEST(SolveFunctionalUnitary, RandomFunctionals) {
  std::mt19937_64 gen(24);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 7;
    const TraceFunctional f = normalize_functional(testing::ginibre(n, n, gen));
    Complex w = testing::random_disk_point(gen);
    if (n == 1) w = std::polar(1.0, std::arg(w));
    const ComplexMatrix x = solve_functional_unitary(f, DiskTarget(w));
    const Certificate cert = certify_functional_unitary(f.matrix(), x, w);
    ASSERT_TRUE(cert.passed()) << "trial " << trial << ": " << cert.failures.front();
  }
}

TEST(RankOneAnnihilator, KillsTheFunctional) {
  std::mt19937_64 gen(25);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + trial % 7;
    const ComplexMatrix b = trial % 5 == 0 ? ComplexMatrix(testing::ginibre(n, 1, gen) * testing::ginibre(1, n, gen))
                                           : testing::ginibre(n, n, gen);
    const RankOneDyad d = rank_one_annihilator(b);
    EXPECT_NEAR(d.x.norm(), 1.0, 1e-12);
    EXPECT_NEAR(d.y.norm(), 1.0, 1e-12);
    // tr(B x y*) = <Bx, y>.
    EXPECT_LE(std::abs((b * d.matrix()).trace()), 1e-12 * std::max(1.0, b.norm()));
  }
  EXPECT_EQ(code_of([] { rank_one_annihilator(ComplexMatrix::Identity(1, 1)); }), ErrorCode::DimensionTooSmall);
}

TEST(CommutativeAverage, PointsOnCircleAverageToTarget) {
  std::mt19937_64 gen(26);
  for (Index n = 2; n <= 10; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const Complex w = testing::random_disk_point(gen);
      const auto points = commutative_average(n, DiskTarget(w));
      ASSERT_EQ(points.size(), static_cast<std::size_t>(n));
      EXPECT_TRUE(certify_average(points, w).passed());
    }
  }
  // Roots of unity average to zero.
  Complex sum(0.0, 0.0);
  for (int j = 0; j < 5; ++j) sum += std::polar(1.0, 2.0 * M_PI * j / 5.0);
  EXPECT_LE(std::abs(sum), 1e-15);
  EXPECT_EQ(code_of([] { commutative_average(1, DiskTarget(Complex(0.5, 0.0))); }), ErrorCode::Infeasible);
}

}  // namespace
}  // namespace ncavg

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ncavg/cli.hpp"
#include "ncavg/json_io.hpp"
#include "ncavg/sampler.hpp"
#include "test_support.hpp"

namespace ncavg {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ncavg_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  Json output() const { return Json::parse(out_.str()); }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("0"), Complex(0.0, 0.0));
  EXPECT_EQ(parse_complex("2"), Complex(2.0, 0.0));
  EXPECT_EQ(parse_complex("0.5i"), Complex(0.0, 0.5));
  EXPECT_EQ(parse_complex("-i"), Complex(0.0, -1.0));
  EXPECT_EQ(parse_complex("i"), Complex(0.0, 1.0));
  EXPECT_EQ(parse_complex("0.3-0.4i"), Complex(0.3, -0.4));
  EXPECT_EQ(parse_complex("1e-3+2E-2i"), Complex(1e-3, 2e-2));
  EXPECT_EQ(parse_complex(" -0.25 + 1.5j "), Complex(-0.25, 1.5));
  EXPECT_THROW(parse_complex("abc"), Error);
  EXPECT_THROW(parse_complex(""), Error);
  EXPECT_THROW(parse_complex("1+2"), Error);
}

TEST(JsonIo, MatrixRoundTripIsBitExact) {
  std::mt19937_64 gen(51);
  const ComplexMatrix m = testing::ginibre(4, 3, gen) * 1e-7 + testing::ginibre(4, 3, gen);
  const ComplexMatrix back = matrix_from_json(Json::parse(matrix_to_json(m).dump()));
  EXPECT_EQ(back, m);
}

TEST(JsonIo, AcceptsPlainNumbersAndRejectsRaggedRows) {
  const ComplexMatrix m = matrix_from_json(Json::parse("[[1, [0, 2]], [\"3-i\", 4]]"));
  EXPECT_EQ(m(0, 1), Complex(0.0, 2.0));
  EXPECT_EQ(m(1, 0), Complex(3.0, -1.0));
  EXPECT_THROW(matrix_from_json(Json::parse("[[1, 2], [3]]")), Error);
  EXPECT_THROW(matrix_from_json(Json::parse("[]")), Error);
}

TEST(JsonIo, ProjectionRoundTrip) {
  RealVector v(6);
  v << 0.4, 0.2, 0.15, 0.1, 0.1, 0.05;
  const NormalState s(v, 0.0);
  for (const LazyProjection& p :
       {finite_rank_projection_solve(s, 0.47), half_projection(s), LazyProjection::cofinite_excluding({1, 3}),
        LazyProjection::identity(), LazyProjection::zero()}) {
    const LazyProjection back = projection_from_json(Json::parse(projection_to_json(p).dump()));
    EXPECT_EQ(back.frame(), p.frame());
    EXPECT_EQ(back.tail(), p.tail());
  }
}

TEST(JsonIo, NormalStateRoundTrip) {
  const NormalState s(Eigen::Vector3d(0.5, 0.3, 0.1), 0.1);
  const NormalState back = normal_state_from_json(normal_state_to_json(s));
  EXPECT_EQ(back.eigenvalues(), s.eigenvalues());
  EXPECT_EQ(back.tail_mass(), s.tail_mass());
}

TEST_F(CliTest, SolveUnitaryAndVerify) {
  const std::string input = write("in.json", R"({"matrix": [[0.5, 0], [0, 0.5]], "target": "0"})");
  const std::string result = (dir_ / "out.json").string();
  ASSERT_EQ(run({"solve-unitary", input, "--output", result}), 0) << err_.str();
  EXPECT_EQ(run({"verify", result, "--input", input}), 0) << err_.str();

  // Tampering with one entry breaks the certificate.
  Json tampered;
  std::ifstream(result) >> tampered;
  tampered["matrix"][0][0][0] = tampered["matrix"][0][0][0].get<double>() + 0.1;
  const std::string bad = write("bad.json", tampered.dump());
  EXPECT_EQ(run({"verify", bad, "--input", input}), 1);

  const std::string other = write("other.json", R"({"matrix": [[1, 0, 0], [0, 0, 0], [0, 0, 0]]})");
  EXPECT_EQ(run({"verify", result, "--input", other}), 2);
}

TEST_F(CliTest, ExitCodes) {
  const std::string input = write("in.json", R"({"matrix": [[0.5, 0], [0, 0.5]]})");
  EXPECT_EQ(run({"solve-unitary", input, "--target", "2"}), 3);
  EXPECT_EQ(run({"solve-unitary", write("bad.json", "{not json")}), 2);
  EXPECT_EQ(run({"solve-unitary", write("neg.json", R"({"matrix": [[1.5, 0], [0, -0.5]]})")}), 2);
  EXPECT_EQ(run({"solve-unitary", write("one.json", R"({"matrix": [[1]]})"), "--target", "0.5"}), 3);
  EXPECT_EQ(run({"solve-unitary", input, "--target", "zzz"}), 2);
  EXPECT_EQ(run({"no-such-command"}), 2);
  EXPECT_EQ(run({"commutative-average", "--n", "1", "--target", "0.5"}), 3);
}

TEST_F(CliTest, FunctionalNormalizationPolicy) {
  const std::string input = write("b.json", R"({"matrix": [[1, 2], [3, 4]], "target": "0.5i"})");
  const std::string result = (dir_ / "out.json").string();
  ASSERT_EQ(run({"solve-functional", input, "--output", result}), 0);
  EXPECT_NE(err_.str().find("warning"), std::string::npos);
  EXPECT_EQ(run({"verify", result, "--input", input}), 0);
  EXPECT_EQ(run({"solve-functional", input, "--strict"}), 2);
  EXPECT_EQ(run({"solve-unitary", input, "--mode", "functional"}), 0);
}

TEST_F(CliTest, RankOneAndExtreme) {
  const std::string b = write("b.json", R"({"matrix": [[1, 0, 0], [0, 0, 0], [0, 0, 0]]})");
  ASSERT_EQ(run({"solve-rank-one-zero", b}), 0);
  const std::string dyad = write("dyad.json", out_.str());
  EXPECT_EQ(run({"verify", dyad, "--input", b}), 0);

  ASSERT_EQ(run({"solve-extreme", b, "--norm", "kyfan:2", "--target", "0.5"}), 0);
  EXPECT_EQ(output()["kind"], "rank_one_dyad");
  const std::string extreme = write("extreme.json", out_.str());
  EXPECT_EQ(run({"verify", extreme, "--input", b}), 0);

  const std::string spread = write("spread.json", R"({"matrix": [[0.3, 0.1], [0, -0.6]]})");
  ASSERT_EQ(run({"solve-extreme", spread, "--norm", "schatten:2", "--target", "1"}), 0) << err_.str();
  EXPECT_EQ(output()["kind"], "sphere_point");
  EXPECT_NE(err_.str().find("warning"), std::string::npos);
  EXPECT_EQ(run({"solve-extreme", spread, "--norm", "schatten:2", "--strict"}), 2);
  EXPECT_EQ(run({"solve-extreme", spread, "--norm", "kyfan:5"}), 2);
  ASSERT_EQ(run({"solve-extreme", spread, "--norm", "kyfan:1", "--orbit", "--target", "0.2-0.1i"}), 0);
}

TEST_F(CliTest, Projections) {
  Json state = {{"eigenvalues", Json::array()}};
  for (int j = 1; j <= 64; ++j) state["eigenvalues"].push_back(std::ldexp(1.0, -j));
  const std::string s = write("state.json", state.dump());
  ASSERT_EQ(run({"solve-projection", s, "--target", "0.6"}), 0);
  EXPECT_EQ(output()["projection"]["rank"], "2");
  EXPECT_NEAR(output()["projection"]["value"].get<double>(), 0.6, 1e-12);
  const std::string p = write("p.json", out_.str());
  EXPECT_EQ(run({"verify", p, "--input", s}), 0);

  EXPECT_EQ(run({"solve-projection", s, "--target", "1.0"}), 3);

  ASSERT_EQ(run({"solve-projection", s, "--dyadic", "3"}), 0);
  EXPECT_EQ(output()["ladder"].size(), 3u);
  const std::string ladder = write("ladder.json", out_.str());
  const std::string outer = write("outer.json", output()["ladder"][0].dump());
  EXPECT_EQ(run({"verify", ladder, "--input", s}), 0);

  ASSERT_EQ(run({"solve-projection", s, "--below", outer, "--target", "0.3"}), 0) << err_.str();
  const std::string sub = write("sub.json", out_.str());
  EXPECT_EQ(run({"verify", sub, "--input", s}), 0);
  EXPECT_EQ(run({"solve-projection", s, "--below", outer, "--target", "0.7"}), 3);
}

TEST_F(CliTest, SampleRangeIsDeterministic) {
  const std::string s = write("d.json", R"({"matrix": [[0.3, 0], [0, 0.7]]})");
  ASSERT_EQ(run({"sample-range", s, "--samples", "500", "--seed", "3", "--workers", "3"}), 0);
  const std::string first = out_.str();
  ASSERT_EQ(run({"sample-range", s, "--samples", "500", "--seed", "3", "--workers", "3"}), 0);
  EXPECT_EQ(out_.str(), first);
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 500);

  ASSERT_EQ(run({"sample-range", s, "--samples", "1"}), 0);
  const std::string single = out_.str();
  EXPECT_EQ(std::count(single.begin(), single.end(), '\n'), 1);
  EXPECT_EQ(run({"sample-range", s, "--samples", "0"}), 2);
  EXPECT_EQ(run({"sample-range", s, "--sampler", "gaussian"}), 2);

  const std::string csv = (dir_ / "pts.csv").string();
  ASSERT_EQ(run({"sample-range", s, "--sampler", "diagonal", "--samples", "2000", "--output", csv}), 0);
  EXPECT_GE(output()["min_modulus"].get<double>(), 0.4 - 1e-9);
}

TEST_F(CliTest, SolveOutputsAreByteIdentical) {
  const std::string s = write("t.json", R"({"matrix": [[0.2, 0.1, 0], [0.1, 0.3, 0], [0, 0, 0.5]]})");
  ASSERT_EQ(run({"solve-unitary", s, "--target", "0.3-0.4i"}), 0);
  const std::string first = out_.str();
  ASSERT_EQ(run({"solve-unitary", s, "--target", "0.3-0.4i"}), 0);
  EXPECT_EQ(out_.str(), first);
}

TEST(Sampler, WorkerPartitionIsReproducible) {
  const DensityState s(Eigen::Vector2d(0.3, 0.7).cast<Complex>().asDiagonal().toDenseMatrix());
  const auto a = sample_range(s, Sampler::Haar, 101, 9, 4);
  const auto b = sample_range(s, Sampler::Haar, 101, 9, 4);
  EXPECT_EQ(a, b);
  // Worker 0 alone with the same seed reproduces the first shard.
  const auto single = sample_range(s, Sampler::Haar, 26, 9, 1);
  EXPECT_TRUE(std::equal(single.begin(), single.end(), a.begin()));
  for (const auto& z : sample_range(s, Sampler::Projection, 200, 1)) EXPECT_LE(std::abs(z), 1.0 + 1e-12);
}

TEST(Sampler, CoverageGridCounts) {
  // One point per in-disk cell centre covers everything.
  std::vector<Complex> centres;
  const double h = 2.0 / 64.0;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) centres.emplace_back(-1.0 + h * (i + 0.5), -1.0 + h * (j + 0.5));
  const CoverageStats all = coverage_stats(centres);
  EXPECT_EQ(all.coverage, 1.0);
  EXPECT_GT(all.disk_cells, 2900u);
  EXPECT_LT(all.disk_cells, static_cast<std::size_t>(M_PI * 0.99 * 0.99 / (h * h)));
  EXPECT_EQ(coverage_stats({Complex(0.0, 0.0)}).hit_cells, 1u);
}

TEST(TwoEigenvalueSearch, NormalizedTraceOnM3CannotReachZero) {
  const DensityState s(ComplexMatrix::Identity(3, 3) / 3.0);
  const auto r = two_eigenvalue_search(s, Complex(0.0, 0.0));
  EXPECT_NEAR(r.best_residual, 1.0 / 3.0, 1e-12);
  // An even-dimensional flat state reaches zero with two eigenvalues.
  const DensityState flat(ComplexMatrix::Identity(4, 4) / 4.0);
  EXPECT_LE(two_eigenvalue_search(flat, Complex(0.0, 0.0)).best_residual, 1e-12);
}

}  // namespace
}  // namespace ncavg

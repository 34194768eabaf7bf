#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "discgp/csv.hpp"
#include "discgp/design.hpp"
#include "oracles.hpp"

using namespace discgp;

namespace {

DesignSpec unit_spec(int n, int d, std::uint64_t seed) {
  DesignSpec s;
  s.n = n;
  s.d = d;
  s.domain = Box::uniform(d, 0.0, 1.0);
  s.seed = seed;
  return s;
}

bool is_permutation_column(const Eigen::MatrixXi &S, int c) {
  std::vector<int> col(S.rows());
  for (Eigen::Index r = 0; r < S.rows(); ++r)
    col[r] = S(r, c);
  std::sort(col.begin(), col.end());
  for (std::size_t i = 0; i < col.size(); ++i)
    if (col[i] != static_cast<int>(i))
      return false;
  return true;
}

} // namespace

TEST(MaximinLhs, TwoPointsOccupyBothHalves) {
  for (auto placement : {StratumPlacement::Center, StratumPlacement::Random}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto s = unit_spec(2, 1, seed);
      s.placement = placement;
      const auto d = maximin_lhs(s);
      const double lo = std::min(d.points(0, 0), d.points(1, 0));
      const double hi = std::max(d.points(0, 0), d.points(1, 0));
      EXPECT_GE(lo, 0.0);
      EXPECT_LT(lo, 0.5);
      EXPECT_GE(hi, 0.5);
      EXPECT_LE(hi, 1.0);
    }
  }
}

TEST(MaximinLhs, ProjectionPropertyIsExact) {
  for (auto placement : {StratumPlacement::Center, StratumPlacement::Random}) {
    for (int n : {2, 7, 20, 50}) {
      for (int d : {1, 2, 5}) {
        auto s = unit_spec(n, d, 100 + n + d);
        s.domain = Box::uniform(d, -2.0, 2.0);
        s.placement = placement;
        const auto S = strata(maximin_lhs(s).points, s.domain);
        for (int c = 0; c < d; ++c)
          EXPECT_TRUE(is_permutation_column(S, c)) << "n=" << n << " d=" << d;
      }
    }
  }
}

TEST(MaximinLhs, Deterministic) {
  const auto s = unit_spec(20, 3, 77);
  EXPECT_EQ(maximin_lhs(s).points, maximin_lhs(s).points);
  auto other = s;
  other.seed = 78;
  EXPECT_NE(maximin_lhs(s).points, maximin_lhs(other).points);
}

TEST(MaximinLhs, NeverWorseThanStart) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = maximin_lhs(unit_spec(15, 3, seed));
    EXPECT_GE(d.min_dist, d.initial_min_dist);
    EXPECT_EQ(d.initial_min_dist, random_lhs(unit_spec(15, 3, seed)).min_dist);
    EXPECT_DOUBLE_EQ(d.min_dist, min_pairwise_distance(d.points, Box::uniform(3, 0.0, 1.0)));
  }
}

TEST(MaximinLhs, BeatsRandomLatinHypercubes) {
  std::mt19937_64 rng(2024);
  std::vector<double> baseline(1000);
  for (auto &v : baseline)
    v = oracle::random_lhs_min_dist(20, 2, rng);
  const double median = oracle::median(baseline);
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    EXPECT_GE(maximin_lhs(unit_spec(20, 2, seed)).min_dist, 0.95 * median) << seed;
}

TEST(MaximinLhs, ScalingEquivariance) {
  const auto unit = maximin_lhs(unit_spec(12, 2, 9));
  auto s = unit_spec(12, 2, 9);
  s.domain = Box({-2.0, 10.0}, {2.0, 13.0});
  const auto direct = maximin_lhs(s);
  for (int i = 0; i < 12; ++i) {
    EXPECT_NEAR(direct.points(i, 0), -2.0 + 4.0 * unit.points(i, 0), 1e-12);
    EXPECT_NEAR(direct.points(i, 1), 10.0 + 3.0 * unit.points(i, 1), 1e-12);
  }
}

TEST(DesignSpecValidation, RejectsBadSpecs) {
  EXPECT_THROW(maximin_lhs(unit_spec(1, 2, 0)), InputError);
  EXPECT_THROW(maximin_lhs(unit_spec(5, 0, 0)), InputError);
  auto s = unit_spec(5, 2, 0);
  s.domain = Box::uniform(3, 0.0, 1.0);
  EXPECT_THROW(maximin_lhs(s), InputError);
  EXPECT_THROW(Box({1.0}, {0.0}), InputError);
}

TEST(UniformTestSet, StaysInBox) {
  const auto box = Box::uniform(2, -2.0, 2.0);
  const auto X = uniform_test_set(1000, box, 5);
  ASSERT_EQ(X.rows(), 1000);
  EXPECT_GE(X.minCoeff(), -2.0);
  EXPECT_LE(X.maxCoeff(), 2.0);
  const auto one = uniform_test_set(1, box, 6);
  ASSERT_EQ(one.rows(), 1);
  EXPECT_TRUE(box.contains(std::span<const double>(one.data(), 2)));
}

TEST(UniformTestSet, MeanIsNearCentre) {
  const auto X = uniform_test_set(100000, Box::uniform(2, -2.0, 2.0), 8);
  // sd of a coordinate is 4 / sqrt(12); 5 standard errors.
  const double tol = 5.0 * (4.0 / std::sqrt(12.0)) / std::sqrt(100000.0);
  EXPECT_NEAR(X.col(0).mean(), 0.0, tol);
  EXPECT_NEAR(X.col(1).mean(), 0.0, tol);
  EXPECT_EQ(uniform_test_set(10, Box::uniform(2, 0, 1), 8), uniform_test_set(10, Box::uniform(2, 0, 1), 8));
}

TEST(Csv, FormatRoundTrips) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Csv, WriteThenRead) {
  const auto path = (std::filesystem::temp_directory_path() / "discgp_csv_rt.csv").string();
  PointSet V(3, 2);
  V << 0.1, -2.0, 1e-300, 3.5, 7.0, 1.0 / 3.0;
  write_csv(path, {"tool: test"}, {"x0", "x1"}, V);
  const auto t = read_csv(path);
  EXPECT_EQ(t.header, (std::vector<std::string>{"x0", "x1"}));
  ASSERT_EQ(t.metadata.size(), 1u);
  EXPECT_EQ(t.values, V);
  std::remove(path.c_str());
}

TEST(Csv, MalformedInput) {
  EXPECT_THROW(parse_csv("a,b\n1,2\n3\n"), InputError);
  EXPECT_THROW(parse_csv("a,b\n1,x\n"), InputError);
  EXPECT_THROW(parse_csv(""), InputError);
  EXPECT_THROW(read_csv("/nonexistent/discgp.csv"), InputError);
}

TEST(Csv, RowWriterProducesWholeRows) {
  const auto path = (std::filesystem::temp_directory_path() / "discgp_rows.csv").string();
  {
    RowWriter w(path, {"seed: 1"}, {"a", "b"});
    w.write_row({"1", "2"});
    w.write_row({"3", "4"});
  }
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "# seed: 1\na,b\n1,2\n3,4\n");
  std::remove(path.c_str());
}

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "discgp/kernel.hpp"
#include "discgp/kernel_config.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace discgp;
using testutil::all_kernel_cases;
using testutil::random_point;
using testutil::random_points;

namespace {

double k1(const Kernel &k, double x, double xp) {
  return k(std::span<const double>(&x, 1), std::span<const double>(&xp, 1));
}

} // namespace

TEST(KernelValues, ZeroDistanceIsVariance) {
  const auto k = Kernel::squared_exp(1, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(k1(k, 0.3, 0.3), 2.0);
}

TEST(KernelValues, SquaredExpHalfLength) {
  EXPECT_NEAR(k1(Kernel::squared_exp(1, 1.0, 0.5), 0.0, 0.5), 0.6065306597126334, 1e-14);
}

TEST(KernelValues, Matern32UnitDistance) {
  EXPECT_NEAR(k1(Kernel::matern32(1), 0.0, 1.0), 0.48335772459650765, 1e-14);
}

TEST(KernelValues, Matern52UnitDistance) {
  EXPECT_NEAR(k1(Kernel::matern52(1), 0.0, 1.0), 0.5239941088318203, 1e-14);
}

TEST(KernelValues, ExponentialUnitDistance) {
  EXPECT_NEAR(k1(Kernel::exponential(1), 0.0, 1.0), 0.36787944117144233, 1e-14);
}

TEST(KernelValues, TensorProductAcrossAxes) {
  const auto k = Kernel::stationary(KernelKind::SquaredExp, 1.5, {0.5, 2.0});
  const std::vector<double> x{0.0, 0.0}, xp{0.5, 2.0};
  EXPECT_NEAR(k(x, xp), 1.5 * std::exp(-0.5) * std::exp(-0.5), 1e-14);
}

TEST(KernelValues, NeuralNetAtOrigin) {
  EXPECT_NEAR(k1(Kernel::neural_net(1, 1.0, 1.0), 0.0, 0.0), 0.46455905439753998, 1e-14);
}

TEST(KernelValues, GibbsWithVaryingLength) {
  // l(x) = x^2 + 1 gives l(0) = 1 and l(1) = 2.
  const auto k = Kernel::gibbs(1, 1.0, LengthScaleFn{LengthScaleKind::Quadratic, 1.0, 1.0, 0});
  EXPECT_NEAR(k1(k, 0.0, 1.0), 0.7322950476607850, 1e-14);
}

TEST(KernelValues, ScaledAtZeroDistance) {
  EXPECT_DOUBLE_EQ(k1(Kernel::scaled(3.0, Kernel::squared_exp(1)), 0.4, 0.4), 3.0);
}

TEST(KernelValues, OuterFunctionIdentity) {
  const auto k = Kernel::outer("id", [](std::span<const double> x) { return x[0]; },
                               Kernel::squared_exp(1));
  EXPECT_NEAR(k1(k, 2.0, 3.0), 3.6391839582758, 1e-12);
}

TEST(KernelValues, ShiftedConstAddsConstant) {
  const auto base = Kernel::squared_exp(1);
  const auto k = Kernel::shifted_const(base, 0.25);
  EXPECT_DOUBLE_EQ(k1(k, 0.1, 0.7), k1(base, 0.1, 0.7) + 0.25);
}

TEST(KernelValues, SumAndProduct) {
  const auto a = Kernel::squared_exp(1, 1.0, 0.7);
  const auto b = Kernel::matern32(1, 2.0, 1.3);
  EXPECT_DOUBLE_EQ(k1(Kernel::sum(a, b), -0.2, 0.9), k1(a, -0.2, 0.9) + k1(b, -0.2, 0.9));
  EXPECT_DOUBLE_EQ(k1(Kernel::product(a, b), -0.2, 0.9), k1(a, -0.2, 0.9) * k1(b, -0.2, 0.9));
}

TEST(KernelValues, DegenerateWarpCollapsesInputs) {
  const auto child = Kernel::squared_exp(1, 1.7, 1.0);
  const auto k = Kernel::warped(WarpMap{WarpKind::Tanh, 1e-12, 0, 1.0}, child);
  EXPECT_NEAR(k1(k, -2.0, 2.0), 1.7, 1e-12);
}

TEST(KernelValues, WarpEvaluatesChildAtMappedInputs) {
  std::mt19937_64 rng(3);
  const auto child = Kernel::squared_exp(2, 1.0, 0.8);
  for (auto wk : {WarpKind::Erf, WarpKind::Logistic, WarpKind::Tanh, WarpKind::Arctan}) {
    const WarpMap w{wk, 2.5, 1, 1.0};
    const auto k = Kernel::warped(w, child);
    for (int t = 0; t < 20; ++t) {
      const auto x = random_point(2, rng), xp = random_point(2, rng);
      EXPECT_DOUBLE_EQ(k(x, xp), child(w(x), w(xp)));
    }
  }
}

TEST(KernelErrors, DimensionMismatch) {
  const auto k = Kernel::squared_exp(2);
  const std::vector<double> x{0.0}, xp{0.0, 1.0};
  EXPECT_THROW(k(x, xp), InputError);
}

TEST(KernelErrors, NonPositiveParameters) {
  EXPECT_THROW(Kernel::squared_exp(1, 0.0, 1.0), ParameterError);
  EXPECT_THROW(Kernel::squared_exp(1, 1.0, -1.0), ParameterError);
  EXPECT_THROW(Kernel::neural_net(1.0, {1.0, 0.0}), ParameterError);
}

TEST(KernelErrors, LengthScaleConstraint) {
  EXPECT_THROW(Kernel::gibbs(1, 1.0, LengthScaleFn{LengthScaleKind::Tanh, 1.0, 1.0, 0}),
               ParameterError);
  EXPECT_THROW(Kernel::gibbs(1, 1.0, LengthScaleFn{LengthScaleKind::Arctan, 1.0, 1.5, 0}),
               ParameterError);
  EXPECT_THROW(Kernel::gibbs(1, 1.0, LengthScaleFn{LengthScaleKind::Logistic, 1.0, 0.0, 0}),
               ParameterError);
  EXPECT_THROW(Kernel::gibbs(2, 1.0, LengthScaleFn{LengthScaleKind::Erf, 1.0, 2.0, 2}),
               ParameterError);
  EXPECT_NO_THROW(Kernel::gibbs(1, 1.0, LengthScaleFn{LengthScaleKind::Arctan, 1.0, 1.6, 0}));
}

TEST(KernelErrors, WithValuesOutsideBounds) {
  const auto k = Kernel::squared_exp(1);
  const std::vector<ParamBounds> b{{0.5, 2.0}, {0.5, 2.0}};
  const auto bounded = k.with_bounds(b);
  const std::vector<double> bad{3.0, 1.0};
  EXPECT_THROW(bounded.with_values(bad), ParameterError);
}

TEST(GramMatrix, SingleRow) {
  const auto k = Kernel::squared_exp(2, 1.3, 1.0);
  PointSet X(1, 2);
  X << 0.1, 0.2;
  const auto K = gram_matrix(k, X);
  ASSERT_EQ(K.rows(), 1);
  EXPECT_DOUBLE_EQ(K(0, 0), 1.3);
}

TEST(GramMatrix, DuplicatedRowIsSingular) {
  std::mt19937_64 rng(5);
  PointSet X = random_points(6, 2, rng);
  X.row(3) = X.row(1);
  const auto [lo, hi] = oracle::eigen_range(gram_matrix(Kernel::squared_exp(2), X));
  EXPECT_LE(std::abs(lo), 1e-12 * hi);
}

TEST(KernelProperties, Symmetry) {
  for (const auto &c : all_kernel_cases()) {
    std::mt19937_64 rng(11);
    for (int d : {1, 2, 3}) {
      const auto k = c.make(d, rng);
      double worst = 0.0;
      for (int t = 0; t < 1000; ++t) {
        const auto x = random_point(d, rng), xp = random_point(d, rng);
        worst = std::max(worst, std::abs(k(x, xp) - k(xp, x)));
      }
      EXPECT_LE(worst, 1e-12) << c.name << " d=" << d;
    }
  }
}

TEST(KernelProperties, GramIsPositiveSemidefinite) {
  for (const auto &c : all_kernel_cases()) {
    std::mt19937_64 rng(17);
    int failures = 0;
    for (int t = 0; t < 200; ++t) {
      const int d = 1 + static_cast<int>(rng() % 3);
      const int n = 2 + static_cast<int>(rng() % 29);
      const auto k = c.make(d, rng);
      const auto [lo, hi] = oracle::eigen_range(gram_matrix(k, random_points(n, d, rng)));
      if (lo < -1e-8 * hi)
        ++failures;
    }
    EXPECT_EQ(failures, 0) << c.name;
  }
}

TEST(KernelProperties, StationaryKindsAreTranslationInvariant) {
  std::mt19937_64 rng(23);
  for (const auto &c : all_kernel_cases()) {
    const auto k = c.make(2, rng);
    if (!k.is_stationary())
      continue;
    for (int t = 0; t < 200; ++t) {
      auto x = random_point(2, rng), xp = random_point(2, rng);
      const double before = k(x, xp);
      const auto shift = random_point(2, rng);
      for (int j = 0; j < 2; ++j) {
        x[j] += shift[j];
        xp[j] += shift[j];
      }
      EXPECT_NEAR(k(x, xp), before, 1e-12) << c.name;
    }
  }
}

TEST(KernelProperties, NonstationaryKindsBreakTranslationInvariance) {
  std::mt19937_64 rng(29);
  const std::vector<Kernel> kernels{
      Kernel::neural_net(2, 1.0, 1.0),
      Kernel::gibbs(2, 1.0, LengthScaleFn{LengthScaleKind::Arctan, 2.0, 2.0, 0}),
      Kernel::gibbs(2, 1.0, LengthScaleFn{LengthScaleKind::Quadratic, 1.0, 0.5, 1}),
  };
  for (const auto &k : kernels) {
    EXPECT_FALSE(k.is_stationary());
    bool violated = false;
    for (int t = 0; t < 50 && !violated; ++t) {
      auto x = random_point(2, rng), xp = random_point(2, rng);
      const double before = k(x, xp);
      const auto shift = random_point(2, rng);
      for (int j = 0; j < 2; ++j) {
        x[j] += shift[j];
        xp[j] += shift[j];
      }
      violated = std::abs(k(x, xp) - before) > 1e-6;
    }
    EXPECT_TRUE(violated) << to_string(k.kind());
  }
}

TEST(KernelProperties, NeuralNetSelfCorrelationBelowOne) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 500; ++t) {
    const int d = 1 + static_cast<int>(rng() % 3);
    std::vector<double> s(d + 1);
    for (auto &v : s)
      v = std::exp(testutil::uniform(rng, std::log(1e-2), std::log(1e3)));
    const double var = testutil::uniform(rng, 0.1, 5.0);
    const auto k = Kernel::neural_net(var, s);
    const auto x = random_point(d, rng);
    EXPECT_LT(k(x, x) / var, 1.0);
  }
}

TEST(KernelProperties, NeuralNetTakesNegativeValues) {
  const auto k = Kernel::neural_net(1.0, {0.1, 100.0});
  EXPECT_LT(k1(k, -1.0, 1.0), -0.5);
}

TEST(KernelProperties, NeuralNetMatchesMonteCarlo) {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 3; ++t) {
    const auto x = random_point(2, rng), xp = random_point(2, rng);
    const std::vector<double> s{0.7, 1.3, 0.4};
    const auto k = Kernel::neural_net(1.8, s);
    const auto mc = oracle::nn_expectation(1.8, s, x, xp, 200000, 100 + t);
    EXPECT_LE(std::abs(k(x, xp) - mc.mean), 4.0 * mc.stderr_);
  }
}

TEST(KernelProperties, GibbsWithConstantLengthIsSquaredExp) {
  std::mt19937_64 rng(41);
  for (int d : {1, 2, 3}) {
    const double l = testutil::uniform(rng, 0.2, 3.0);
    const auto g = Kernel::gibbs(d, 1.4, LengthScaleFn{LengthScaleKind::Constant, 0.0, l, 0});
    const auto se = Kernel::squared_exp(d, 1.4, l);
    for (int t = 0; t < 200; ++t) {
      const auto x = random_point(d, rng), xp = random_point(d, rng);
      EXPECT_NEAR(g(x, xp), se(x, xp), 1e-12);
    }
  }
}

TEST(KernelProperties, PeriodicWarpRepeats) {
  std::mt19937_64 rng(43);
  const double period = 1.7;
  const auto k = Kernel::warped(WarpMap{WarpKind::PeriodicPair, 1.0, 0, period},
                                Kernel::squared_exp(3, 1.0, 0.6));
  EXPECT_EQ(k.dim(), 2);
  for (int t = 0; t < 200; ++t) {
    auto x = random_point(2, rng);
    const auto xp = random_point(2, rng);
    const double before = k(x, xp);
    x[0] += period;
    EXPECT_NEAR(k(x, xp), before, 1e-12);
  }
}

TEST(KernelParams, FlattenedLayout) {
  const auto k = Kernel::sum(Kernel::squared_exp(2),
                             Kernel::gibbs(2, 1.0, LengthScaleFn{LengthScaleKind::Erf, 1.0, 2.0, 1}));
  const auto flat = k.flat_params();
  ASSERT_EQ(flat.size(), 6u);
  EXPECT_EQ(flat[0].name, "k0.variance");
  EXPECT_EQ(flat[2].name, "k0.length1");
  EXPECT_EQ(flat[5].name, "k1.c2");
  EXPECT_EQ(k.num_params(), 6u);
}

TEST(KernelParams, WithValuesRoundTrip) {
  std::mt19937_64 rng(47);
  for (const auto &c : all_kernel_cases()) {
    const auto k = c.make(2, rng);
    const auto v = k.flat_values();
    const auto same = k.with_values(v);
    const auto x = random_point(2, rng), xp = random_point(2, rng);
    EXPECT_EQ(same(x, xp), k(x, xp)) << c.name;
  }
}

TEST(KernelParams, WithAxisMovesLengthScaleInput) {
  const auto k = Kernel::gibbs(2, 1.0, LengthScaleFn{LengthScaleKind::Arctan, 3.0, 2.0, 0});
  const auto k1ax = k.with_axis(1);
  EXPECT_EQ(k1ax.lsfn()->axis, 1);
  const std::vector<double> x{0.5, -1.0}, xp{0.3, 0.2};
  const std::vector<double> xs{-1.0, 0.5}, xps{0.2, 0.3};
  EXPECT_DOUBLE_EQ(k(x, xp), k1ax(xs, xps));
}

TEST(KernelConfig, RoundTripPreservesValues) {
  register_outer_function("sin-bump", [](std::span<const double>) { return 1.0; });
  std::mt19937_64 rng(53);
  for (const auto &c : all_kernel_cases()) {
    if (c.name == "OuterFn")
      continue;
    for (int t = 0; t < 20; ++t) {
      const int d = 1 + static_cast<int>(rng() % 3);
      const auto k = c.make(d, rng);
      const auto back = kernel_from_string(kernel_to_string(k));
      EXPECT_EQ(back.kind(), k.kind()) << c.name;
      EXPECT_EQ(back.flat_values(), k.flat_values()) << c.name;
      for (int p = 0; p < 5; ++p) {
        const auto x = random_point(d, rng), xp = random_point(d, rng);
        EXPECT_EQ(back(x, xp), k(x, xp)) << c.name;
      }
    }
  }
}

TEST(KernelConfig, OuterFunctionByName) {
  const auto k = Kernel::outer("norm2", lookup_outer_function("norm2"), Kernel::squared_exp(2));
  const auto back = kernel_from_json(to_json(k));
  const std::vector<double> x{1.0, 2.0}, xp{-0.5, 0.3};
  EXPECT_EQ(back(x, xp), k(x, xp));
  EXPECT_EQ(back.outer_name(), "norm2");
}

TEST(KernelConfig, UnknownOuterFunctionRejected) {
  auto j = to_json(Kernel::outer("norm2", lookup_outer_function("norm2"), Kernel::squared_exp(1)));
  j["outer_fn"] = "no-such-function";
  EXPECT_THROW(kernel_from_json(j), InputError);
}

TEST(KernelConfig, MalformedDocument) {
  EXPECT_THROW(kernel_from_string("{\"kind\": \"Bogus\", \"dim\": 1}"), InputError);
  EXPECT_THROW(kernel_from_string("not json"), InputError);
}

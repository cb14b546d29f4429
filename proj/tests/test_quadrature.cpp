// Gauss-Hermite rule construction, Gaussian expectations and adaptive
// integration on the line.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "actsig/errors.hpp"
#include "actsig/quadrature.hpp"

namespace {

using namespace actsig;

const double kSqrtPi = std::sqrt(std::numbers::pi);

// numpy.polynomial.hermite.hermgauss(10), nonnegative half
constexpr double kNodes10[] = {0.34290132722370459, 1.0366108297895136, 1.7566836492998816, 2.5327316742327897,
                               3.4361591188377374};
constexpr double kWeights10[] = {0.61086263373532579, 0.24013861108231471, 0.033874394455481106,
                                 0.0013436457467812324, 7.640432855232641e-06};

TEST(BuildRule, OrderOneIsTheOriginWithFullMass) {
  const QuadratureRule r = build_rule(1);
  ASSERT_EQ(r.nodes.size(), 1u);
  EXPECT_EQ(r.nodes[0], 0.0);
  EXPECT_NEAR(r.weights[0], kSqrtPi, 1e-15);
}

TEST(BuildRule, OrderTwoMatchesRootsOfH2) {
  const QuadratureRule r = build_rule(2);
  ASSERT_EQ(r.nodes.size(), 2u);
  EXPECT_NEAR(r.nodes[0], -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.nodes[1], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.weights[0], kSqrtPi / 2.0, 1e-15);
  EXPECT_NEAR(r.weights[1], kSqrtPi / 2.0, 1e-15);
}

TEST(BuildRule, OrderTenMatchesReferenceTable) {
  const QuadratureRule r = build_rule(10);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(r.nodes[5 + i], kNodes10[i], 1e-14);
    EXPECT_NEAR(r.weights[5 + i], kWeights10[i], 1e-15 + 1e-13 * kWeights10[i]);
  }
}

TEST(BuildRule, Order160OutermostNodeMatchesReference) {
  const QuadratureRule r = build_rule(160);
  EXPECT_NEAR(r.nodes.back(), 17.204433257886514, 1e-12);
  EXPECT_NEAR(r.weights.back() / 1.7610777213868267e-129, 1.0, 1e-9);
  EXPECT_NEAR(r.nodes[80], 0.087673438648223828, 1e-14);
  EXPECT_NEAR(r.weights[80], 0.17400560617482028, 1e-14);
}

TEST(BuildRule, MomentIdentitiesAndSymmetry) {
  for (int n : {1, 2, 3, 7, 40, 120, 160, 300, 1024}) {
    const QuadratureRule r = build_rule(n);
    ASSERT_EQ(r.order, n);
    ASSERT_EQ(r.nodes.size(), static_cast<std::size_t>(n));
    ASSERT_EQ(r.weights.size(), static_cast<std::size_t>(n));
    double m0 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
      m0 += r.weights[i];
      m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
      EXPECT_NEAR(r.nodes[i], -r.nodes[n - 1 - i], 1e-13) << "n=" << n << " i=" << i;
      EXPECT_GE(r.weights[i], 0.0);
      if (i > 0) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
    }
    EXPECT_NEAR(m0, kSqrtPi, 1e-12) << "n=" << n;
    if (n >= 2) EXPECT_NEAR(m2, kSqrtPi / 2.0, 1e-12) << "n=" << n;
  }
}

TEST(BuildRule, RejectsOrdersOutsideRange) {
  EXPECT_THROW(build_rule(0), ArgumentError);
  EXPECT_THROW(build_rule(-3), ArgumentError);
  EXPECT_THROW(build_rule(1025), ArgumentError);
}

TEST(GaussianLaw, RejectsNonPositiveStd) {
  EXPECT_THROW(GaussianLaw(0.0, 0.0), ArgumentError);
  EXPECT_THROW(GaussianLaw(1.0, -1.0), ArgumentError);
}

TEST(GaussExpect, SecondMomentOfStandardNormal) {
  const QuadratureRule r = build_rule(160);
  EXPECT_NEAR(gauss_expect(r, GaussianLaw::centered(1.0), [](double x) { return x * x; }), 1.0, 1e-12);
}

TEST(GaussExpect, PolynomialExactness) {
  // E[X^k] for X ~ N(mu, s^2), k <= 2n - 1, against the moment recursion
  // E[X^k] = mu E[X^{k-1}] + (k-1) s^2 E[X^{k-2}].
  const int n = 12;
  const QuadratureRule r = build_rule(n);
  for (double mu : {0.0, 0.7, -1.3}) {
    for (double s : {0.5, 1.0, 1.7}) {
      std::vector<double> m{1.0, mu};
      for (int k = 2; k <= 2 * n - 1; ++k) m.push_back(mu * m[k - 1] + (k - 1) * s * s * m[k - 2]);
      for (int k = 0; k <= 2 * n - 1; ++k) {
        const double got = gauss_expect(r, GaussianLaw(mu, s), [k](double x) { return std::pow(x, k); });
        EXPECT_NEAR(got, m[k], 1e-11 * std::max(1.0, std::abs(m[k]))) << "k=" << k << " mu=" << mu << " s=" << s;
      }
    }
  }
}

TEST(GaussExpect, OddFunctionsVanishForCenteredLaw) {
  const QuadratureRule r = build_rule(160);
  EXPECT_NEAR(gauss_expect(r, GaussianLaw::centered(2.0), [](double x) { return std::tanh(x); }), 0.0, 1e-13);
  EXPECT_NEAR(gauss_expect(r, GaussianLaw::centered(0.5), [](double x) { return x * x * x; }), 0.0, 1e-13);
}

TEST(GaussExpect, ReluMeanMatchesClosedForm) {
  const QuadratureRule r = build_rule(160);
  const std::vector<double> kink{0.0};
  const auto relu = [](double x) { return x > 0.0 ? x : 0.0; };
  EXPECT_NEAR(gauss_expect(r, GaussianLaw::centered(1.0), relu, kink), 1.0 / std::sqrt(2.0 * std::numbers::pi),
              1e-13);
}

TEST(GaussExpect, SigmoidMeanIsOneHalfByOddSymmetry) {
  // sigma(x) - 1/2 is odd, so E[sigma(X)] = 1/2 for every centered law
  const QuadratureRule r = build_rule(160);
  const auto sigm = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  EXPECT_NEAR(gauss_expect(r, GaussianLaw::centered(2.0), sigm), 0.5, 1e-14);
}

TEST(GaussExpect, NonFiniteIntegrandNamesTheNode) {
  const QuadratureRule r = build_rule(20);
  try {
    gauss_expect(r, GaussianLaw::centered(1.0), [](double x) { return x > 1.0 ? INFINITY : 0.0; });
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_GT(e.location(), 1.0);
  }
}

TEST(GaussExpect, ConvergenceBetweenOrders120And160ForSmoothBoundedIntegrands) {
  const QuadratureRule r120 = build_rule(120);
  const QuadratureRule r160 = build_rule(160);
  const auto f = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  for (double s : {0.5, 1.0, 2.0}) {
    const double a = gauss_expect(r120, GaussianLaw::centered(s), [&](double x) { return f(x) * f(x); });
    const double b = gauss_expect(r160, GaussianLaw::centered(s), [&](double x) { return f(x) * f(x); });
    EXPECT_LT(std::abs(a - b) / std::abs(b), 1e-6) << "s=" << s;
  }
}

TEST(IntegrateLine, GaussianIntegral) {
  EXPECT_NEAR(integrate_line([](double x) { return std::exp(-x * x); }, 1e-12), kSqrtPi, 1e-10);
}

TEST(IntegrateLine, TotalVariationOfTanhSlope) {
  const auto f = [](double x) {
    const double s = 1.0 / std::cosh(x);
    return std::abs(-2.0 * std::tanh(x) * s * s);
  };
  const std::vector<double> breaks{0.0};
  EXPECT_NEAR(integrate_line(f, 1e-11, breaks), 2.0, 1e-8);
}

TEST(IntegrateRay, FermiDiracIntegralIsPiSquaredOverTwelve) {
  const double oracle = std::numbers::pi * std::numbers::pi / 12.0;
  EXPECT_NEAR(integrate_ray([](double x) { return x / (1.0 + std::exp(x)); }, 0.0, Direction::positive, 1e-11),
              oracle, 1e-8);
  EXPECT_NEAR(integrate_ray([](double x) { return -x / (1.0 + std::exp(-x)); }, 0.0, Direction::negative, 1e-11),
              oracle, 1e-8);
}

TEST(IntegrateRay, NonDecayingIntegrandReportsLastPanel) {
  try {
    integrate_ray([](double) { return 1.0; }, 0.0, Direction::positive, 1e-10);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.last_magnitude(), 0.0);
  }
}

TEST(IntegrateInterval, HandlesReversedAndEmptyIntervals) {
  const auto f = [](double x) { return std::cos(x); };
  EXPECT_NEAR(integrate_interval(f, 0.0, 1.0, 1e-13), std::sin(1.0), 1e-13);
  EXPECT_NEAR(integrate_interval(f, 1.0, 0.0, 1e-13), -std::sin(1.0), 1e-13);
  EXPECT_EQ(integrate_interval(f, 2.0, 2.0, 1e-13), 0.0);
  EXPECT_THROW(integrate_interval(f, 0.0, 1.0, 0.0), ArgumentError);
}

TEST(IntegrateInterval, RoundoffLimitedIntegrandTerminatesQuickly) {
  // x Phi(x) - x near x = 6 is dominated by cancellation noise; the refinement
  // must stop at the rounding floor instead of exhausting the panel budget.
  int calls = 0;
  const auto f = [&calls](double x) {
    ++calls;
    return x * 0.5 * std::erfc(-x / std::sqrt(2.0)) - x;
  };
  integrate_interval(f, 6.0, 6.0 + 6.0 / 2048.0, 1e-17);
  EXPECT_LT(calls, 2000);
}

}  // namespace

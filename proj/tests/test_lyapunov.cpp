// Contraction certificates, quadratic and primitive-based Lyapunov descent
// checks, probe placement and the Gaussian L2 gain check.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "actsig/errors.hpp"
#include "actsig/lyapunov.hpp"

namespace {

using namespace actsig;

const QuadratureRule& rule() {
  static const QuadratureRule r = build_rule(kDefaultOrder);
  return r;
}

TEST(DescentConstants, ClosedForms) {
  EXPECT_DOUBLE_EQ(descent_constant(0.5), 1.5);
  EXPECT_DOUBLE_EQ(conservative_descent_constant(0.5), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(descent_constant(0.0), 0.5);
  EXPECT_DOUBLE_EQ(conservative_descent_constant(0.0), 0.5);
}

TEST(CertifyContraction, TanhHalfGain) {
  const ContractionCertificate c = certify_contraction(builtin("tanh"), 0.5, 0.0, 1.0, rule());
  EXPECT_TRUE(c.is_contraction);
  EXPECT_FALSE(c.sup_slope_approximate);
  EXPECT_DOUBLE_EQ(c.lipschitz_T, 0.5);
  EXPECT_NEAR(c.x_star, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(c.descent_constant, 1.5);
  EXPECT_NEAR(c.l2_gain, 0.5 * 0.681471131045379, 1e-5);
}

TEST(CertifyContraction, SigmoidFixedPoint) {
  const ContractionCertificate c = certify_contraction(builtin("sigmoid"), 1.0, 0.0, 1.0, rule());
  ASSERT_TRUE(c.is_contraction);
  EXPECT_DOUBLE_EQ(c.lipschitz_T, 0.25);
  EXPECT_NEAR(c.x_star, 1.0 / (1.0 + std::exp(-c.x_star)), 1e-12);
  EXPECT_NEAR(c.x_star, 0.659046068, 1e-8);
}

TEST(CertifyContraction, ApproximateSupSlopeWhenMetadataIsMissing) {
  const ContractionCertificate c = certify_contraction(builtin("swish"), 0.5, 0.0, 1.0, rule());
  EXPECT_TRUE(c.sup_slope_approximate);
  EXPECT_NEAR(c.sup_slope, 1.0998, 1e-4);
  EXPECT_TRUE(c.is_contraction);
}

TEST(CertifyContraction, ExpansiveMapsHaveNoFixedPointData) {
  const ContractionCertificate c = certify_contraction(builtin("tanh"), 1.5, 0.0, 1.0, rule());
  EXPECT_FALSE(c.is_contraction);
  EXPECT_TRUE(std::isnan(c.x_star));
  EXPECT_THROW(verify_descent(c, builtin("tanh"), chebyshev_probes(-1, 1)), ArgumentError);
  EXPECT_THROW(certify_contraction(builtin("tanh"), NAN, 0.0, 1.0, rule()), ArgumentError);
}

TEST(VerifyDescent, ConservativeConstantHoldsForContractions) {
  // For |T x - x*| <= L |x - x*| the quadratic V decreases by at least
  // (1 - L) / (2 (1 + L)) (T x - x)^2.
  const struct {
    const char* name;
    double a, b;
  } cases[] = {{"tanh", 0.5, 0.0}, {"tanh", 0.9, 0.3}, {"sigmoid", 1.0, 0.0}, {"sigmoid", 3.5, -1.0},
               {"relu", 0.7, 0.2}, {"leaky_relu(0.2)", -0.8, 0.1}, {"gelu", 0.5, 0.0}};
  for (const auto& k : cases) {
    const Activation act = builtin(k.name);
    const ContractionCertificate c = certify_contraction(act, k.a, k.b, 1.0, rule());
    ASSERT_TRUE(c.is_contraction) << k.name;
    const DescentReport r = verify_descent(c, act, chebyshev_probes(-5, 5), c.conservative_constant);
    EXPECT_TRUE(r.passed) << k.name << " a=" << k.a << " worst slack " << r.worst_slack;
    EXPECT_EQ(r.probes, 64u);
  }
}

TEST(VerifyDescent, DetectsViolationsOfAnOverlyStrongConstant) {
  // Far from x* tanh saturates, so T x - x* ~ 0 and the decrease of V is about
  // x^2 / 2, well short of 1.5 (T x - x)^2 ~ 1.5 x^2.
  const Activation act = builtin("tanh");
  const ContractionCertificate c = certify_contraction(act, 0.5, 0.0, 1.0, rule());
  const DescentReport r = verify_descent(c, act, {4.0});
  ASSERT_FALSE(r.passed);
  ASSERT_EQ(r.violations.size(), 1u);
  const double tx = std::tanh(2.0);
  EXPECT_NEAR(r.violations[0].lhs, 0.5 * (tx * tx - 16.0), 1e-14);
  EXPECT_NEAR(r.violations[0].rhs, -1.5 * (tx - 4.0) * (tx - 4.0), 1e-14);
  EXPECT_EQ(r.worst_x, 4.0);
}

TEST(FLyapunov, MatchesClosedFormPrimitiveOfTanh) {
  // F(z) = log cosh z, V(x) = F(a x) - lambda x^2 / 2
  const Activation act = builtin("tanh");
  const double a = 0.5, lambda = 0.5;
  const std::vector<double> probes{-3.0, -1.0, 0.5, 2.0};
  const DescentReport r = f_lyapunov_descent(act, a, lambda, probes);
  EXPECT_EQ(r.probes, probes.size());
  const auto V = [&](double x) { return std::log(std::cosh(a * x)) - 0.5 * lambda * x * x; };
  const double c = 0.5 * (lambda - a * a);
  double worst = INFINITY;
  for (double x : probes) {
    const double tx = std::tanh(a * x);
    worst = std::min(worst, -c * (tx - x) * (tx - x) + 1e-10 - (V(tx) - V(x)));
  }
  EXPECT_NEAR(r.worst_slack, worst, 1e-12);
  for (const ProbeViolation& v : r.violations) {
    const double tx = std::tanh(a * v.x);
    EXPECT_NEAR(v.lhs, V(tx) - V(v.x), 1e-12) << v.x;
  }
}

TEST(FLyapunov, RejectsUnsuitableActivations) {
  const auto probes = chebyshev_probes(-1, 1, 8);
  EXPECT_THROW(f_lyapunov_descent(builtin("sigmoid"), 0.5, 1.0, probes), ArgumentError);  // phi(0) != 0
  EXPECT_THROW(f_lyapunov_descent(builtin("swish"), 0.5, 1.0, probes), ArgumentError);    // not monotone
  EXPECT_THROW(f_lyapunov_descent(builtin("tanh"), 0.5, 0.2, probes), ArgumentError);     // lambda <= a^2 L
  EXPECT_THROW(f_lyapunov_descent(builtin("tanh"), -0.5, 1.0, probes), ArgumentError);
}

TEST(ChebyshevProbes, InteriorSymmetricAndSorted) {
  const auto p = chebyshev_probes(-5, 5, 64);
  ASSERT_EQ(p.size(), 64u);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_GT(p[i], -5.0);
    EXPECT_LT(p[i], 5.0);
    EXPECT_NEAR(p[i], -p[p.size() - 1 - i], 1e-13);
    if (i > 0) EXPECT_LT(p[i - 1], p[i]);
  }
  EXPECT_NEAR(chebyshev_probes(0, 2, 1)[0], 1.0, 1e-15);
  EXPECT_THROW(chebyshev_probes(1, 1, 4), ArgumentError);
  EXPECT_THROW(chebyshev_probes(0, 1, 0), ArgumentError);
}

TEST(L2Contraction, IncrementRatiosApproachTheSlopeMomentAsTheStepShrinks) {
  for (const std::string& n : {"relu", "tanh", "gelu"}) {
    const L2Report r = l2_contraction_check(builtin(n), 0.8, 1.0, 100000, 42, rule());
    ASSERT_EQ(r.entries.size(), 3u);
    EXPECT_EQ(r.entries[2].h, 0.001);
    EXPECT_TRUE(r.entries[2].holds) << n;
    EXPECT_NEAR(r.entries[2].ratio, r.g2, 5.0 * r.entries[2].std_error + 1e-3) << n;
    EXPECT_NEAR(r.gain, 0.8 * r.g2, 1e-15);
  }
}

TEST(L2Contraction, FiniteStepsCanExceedTheSlopeMomentForRelu) {
  // For ReLU, E[(phi(Z+h) - phi(Z))^2] = h^2/2 + int_{-h}^0 (z+h)^2 p(z) dz, so
  // the ratio is about sqrt(1/2 + p(0) h / 3) > g2 = sqrt(1/2): the shifted
  // law puts more mass on the active side. The check reports this honestly.
  const L2Report r = l2_contraction_check(builtin("relu"), 0.8, 1.0, 100000, 42, rule());
  EXPECT_NEAR(r.g2, std::sqrt(0.5), 1e-12);
  EXPECT_TRUE(r.contraction);
  EXPECT_EQ(r.entries[0].h, 0.1);
  const double approx = std::sqrt(0.5 + 0.1 / (3.0 * std::sqrt(2.0 * std::numbers::pi)));
  EXPECT_NEAR(r.entries[0].ratio, approx, 5.0 * r.entries[0].std_error + 1e-3);
  EXPECT_FALSE(r.entries[0].holds);
  EXPECT_FALSE(r.all_hold);
  EXPECT_THROW(l2_contraction_check(builtin("relu"), 0.8, 0.0, 100, 1, rule()), ArgumentError);
}

}  // namespace

// Mixed-Hessian Monte Carlo estimators and the g4 / bounded-variation bounds.

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "actsig/errors.hpp"
#include "actsig/kernel.hpp"

namespace {

using namespace actsig;

const QuadratureRule& rule() {
  static const QuadratureRule r = build_rule(kDefaultOrder);
  return r;
}

Vec unit(int dim, int k) {
  Vec v(dim, 0.0);
  v[k] = 1.0;
  return v;
}

TEST(G4Bound, ReluIsConstantInTheNorms) {
  // g4 of ReLU is (1/2)^(1/4) at every scale
  for (double nx : {0.3, 1.0, 3.0}) {
    EXPECT_NEAR(g4_bound(builtin("relu"), nx, 2.0, rule()), std::sqrt(3.0) * std::sqrt(0.5), 1e-12);
  }
  EXPECT_THROW(g4_bound(builtin("relu"), 0.0, 1.0, rule()), ArgumentError);
}

TEST(BvBound, SupSlopeAndVariationRoutes) {
  EXPECT_NEAR(bv_bound(builtin("relu")), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(bv_bound(builtin("sigmoid")), std::sqrt(3.0) / 16.0, 1e-15);
  // relu: TV(phi') = 1 and phi'(+inf) - phi'(-inf) = 1, so M = 2
  EXPECT_NEAR(bv_bound(builtin("relu"), SlopeRoute::variation), 4.0 * std::sqrt(3.0), 1e-12);
  // tanh: TV = 2, no asymptotic slope difference
  EXPECT_NEAR(bv_bound(builtin("tanh"), SlopeRoute::variation), 4.0 * std::sqrt(3.0), 1e-8);
  const double gelu_tv = 1.51561658074;
  EXPECT_NEAR(bv_bound(builtin("gelu")), std::sqrt(3.0) * (gelu_tv + 1.0) * (gelu_tv + 1.0), 1e-7);
}

TEST(BvBound, Errors) {
  EXPECT_THROW(bv_bound(builtin("poly(3)")), DomainError);
  EXPECT_THROW(bv_bound(builtin("gelu"), SlopeRoute::sup_slope), MetadataError);
}

TEST(MixedHessian, IdentityGivesTheInnerProductOfDirections) {
  // phi' = 1: E[(a.w)(b.w)] = a.b
  const int d = 6;
  Vec a = unit(d, 0), b(d, 0.0);
  b[0] = 0.6;
  b[1] = 0.8;
  const Vec x = unit(d, 2), y = unit(d, 3);
  const EstimateWithError e = mc_mixed_hessian(builtin("identity"), x, y, a, b, 200000, 5);
  EXPECT_NEAR(e.value, 0.6, 4.0 * e.std_error);
  EXPECT_EQ(e.samples, 200000u);
}

TEST(MixedHessian, ReluAlongItsOwnDirectionIsOneHalf) {
  // x = y = a = b: E[1{z > 0} z^2] = 1/2
  const int d = 5;
  Vec v(d, 1.0 / std::sqrt(5.0));
  const EstimateWithError e = mc_mixed_hessian(builtin("relu"), v, v, v, v, 200000, 9);
  EXPECT_NEAR(e.value, 0.5, 4.0 * e.std_error);
}

TEST(MixedHessian, ProjectedAndFullEstimatorsAgree) {
  const int d = 7;
  Vec x(d), y(d), a(d), b(d);
  for (int i = 0; i < d; ++i) {
    x[i] = std::sin(1.0 + i);
    y[i] = std::cos(2.0 * i);
    a[i] = 1.0 + 0.1 * i;
    b[i] = (i % 2 ? -1.0 : 1.0) * (0.5 + i);
  }
  const auto normalize = [](Vec& v) {
    double n = 0.0;
    for (double e : v) n += e * e;
    for (double& e : v) e /= std::sqrt(n);
  };
  normalize(a);
  normalize(b);
  for (const std::string& n : {"tanh", "gelu"}) {
    const EstimateWithError p = mc_mixed_hessian(builtin(n), x, y, a, b, 200000, 3);
    const EstimateWithError f = mc_mixed_hessian_full(builtin(n), x, y, a, b, 200000, 4);
    EXPECT_LT(std::abs(p.value - f.value), 5.0 * std::hypot(p.std_error, f.std_error)) << n;
  }
}

TEST(MixedHessian, ValidatesInputs) {
  const Vec e0 = unit(3, 0);
  EXPECT_THROW(mc_mixed_hessian(builtin("relu"), e0, e0, Vec{2, 0, 0}, e0, 100, 1), ArgumentError);
  EXPECT_THROW(mc_mixed_hessian(builtin("relu"), e0, Vec{1, 0}, e0, e0, 100, 1), ArgumentError);
  EXPECT_THROW(mc_mixed_hessian(builtin("relu"), Vec{}, Vec{}, Vec{}, Vec{}, 100, 1), ArgumentError);
}

TEST(BoundStress, NoViolationsAndBoundsIndependentOfDimension) {
  for (const std::string& n : {"relu", "tanh", "gelu"}) {
    const StressResult lo = bound_stress(builtin(n), 2, 6, 40000, 42, rule());
    const StressResult hi = bound_stress(builtin(n), 64, 6, 40000, 42, rule());
    EXPECT_EQ(lo.failures, 0) << n;
    EXPECT_EQ(hi.failures, 0) << n;
    for (int t = 0; t < 6; ++t) {
      EXPECT_EQ(lo.reports[t].norm_x, hi.reports[t].norm_x);
      EXPECT_EQ(lo.reports[t].bound, hi.reports[t].bound);
      EXPECT_EQ(lo.reports[t].dim, 2);
      EXPECT_EQ(hi.reports[t].dim, 64);
      EXPECT_GE(lo.reports[t].norm_x, 0.25);
      EXPECT_LE(lo.reports[t].norm_x, 4.0);
    }
  }
}

TEST(BoundStress, SerialAndParallelAgree) {
  const StressResult p = bound_stress(builtin("tanh"), 8, 4, 20000, 7, rule());
  const StressResult s = bound_stress_serial(builtin("tanh"), 8, 4, 20000, 7, rule());
  for (int t = 0; t < 4; ++t) EXPECT_EQ(p.reports[t].mc_estimate.value, s.reports[t].mc_estimate.value);
  EXPECT_THROW(bound_stress(builtin("tanh"), 0, 4, 100, 7, rule()), ArgumentError);
  EXPECT_THROW(bound_stress(builtin("tanh"), 8, 0, 100, 7, rule()), ArgumentError);
}

}  // namespace

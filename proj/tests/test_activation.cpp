// Activation registry: evaluators, derivative consistency, tail metadata,
// affine wrapping and the slope taxonomy.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <string>

#include "actsig/activation.hpp"
#include "actsig/errors.hpp"

namespace {

using namespace actsig;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> all_builtins() {
  return {"relu", "leaky_relu", "leaky_relu(0.2)", "tanh", "sigmoid", "swish", "gelu", "mish", "telu", "identity",
          "poly(2)", "poly(3)"};
}

bool near_kink(const Activation& a, double x) {
  for (double k : a.kink_locations()) {
    if (std::abs(x - k) < 1e-3) return true;
  }
  return false;
}

TEST(Builtin, DerivativesMatchFiniteDifferences) {
  for (const std::string& n : all_builtins()) {
    const Activation a = builtin(n);
    for (int i = 0; i < 64; ++i) {
      const double x = -6.0 + 12.0 * (i + 0.5) / 64.0;
      if (near_kink(a, x)) continue;
      const double h = 1e-5;
      const double fd = (a.value(x + h) - a.value(x - h)) / (2.0 * h);
      EXPECT_NEAR(a.deriv(x), fd, 1e-6 * std::max(1.0, std::abs(fd))) << n << " x=" << x;
      if (a.second_deriv) {
        const double fd2 = (a.deriv(x + h) - a.deriv(x - h)) / (2.0 * h);
        EXPECT_NEAR((*a.second_deriv)(x), fd2, 1e-5 * std::max(1.0, std::abs(fd2))) << n << " x=" << x;
      }
    }
  }
}

TEST(Builtin, KinkJumpsMatchOneSidedSlopes) {
  for (const std::string& n : all_builtins()) {
    const Activation a = builtin(n);
    for (const Kink& k : a.kinks) {
      EXPECT_NEAR(a.deriv(k.location + 1e-8) - a.deriv(k.location - 1e-8), k.slope_jump, 1e-6) << n;
    }
  }
}

TEST(Builtin, SupSlopeMetadataIsNeverExceeded) {
  for (const std::string& n : all_builtins()) {
    const Activation a = builtin(n);
    if (!a.sup_slope) continue;
    for (int i = 0; i <= 100000; ++i) {
      const double x = -50.0 + 100.0 * i / 100000.0;
      ASSERT_LE(std::abs(a.deriv(x)), *a.sup_slope + 1e-12) << n << " x=" << x;
    }
  }
  EXPECT_EQ(*builtin("relu").sup_slope, 1.0);
  EXPECT_EQ(*builtin("leaky_relu").sup_slope, 1.0);
  EXPECT_EQ(*builtin("tanh").sup_slope, 1.0);
  EXPECT_EQ(*builtin("sigmoid").sup_slope, 0.25);
}

TEST(Builtin, AsymptoticMetadataTable) {
  struct Row {
    const char* name;
    double ap, am;
    Finiteness c;
  };
  const Row rows[] = {{"relu", 1, 0, Finiteness::finite},     {"leaky_relu(0.2)", 1, 0.2, Finiteness::finite},
                      {"tanh", 0, 0, Finiteness::infinite},   {"sigmoid", 0, 0, Finiteness::infinite},
                      {"swish", 1, 0, Finiteness::finite},    {"gelu", 1, 0, Finiteness::finite},
                      {"mish", 1, 0, Finiteness::finite},     {"telu", 1, 0, Finiteness::finite},
                      {"identity", 1, 1, Finiteness::finite}, {"poly(3)", kInf, kInf, Finiteness::infinite}};
  for (const Row& r : rows) {
    const Activation a = builtin(r.name);
    EXPECT_EQ(*a.alpha_plus, r.ap) << r.name;
    EXPECT_EQ(*a.alpha_minus, r.am) << r.name;
    EXPECT_EQ(a.c_phi, r.c) << r.name;
  }
  EXPECT_EQ(*builtin("tanh").tv_analytic, 2.0);
  EXPECT_EQ(*builtin("relu").tv_analytic, 1.0);
  EXPECT_NEAR(*builtin("leaky_relu(0.2)").tv_analytic, 0.8, 1e-15);
  EXPECT_EQ(*builtin("identity").tv_analytic, 0.0);
}

TEST(Builtin, ReluHasOneUnitKinkAtZero) {
  const Activation a = builtin("relu");
  ASSERT_EQ(a.kinks.size(), 1u);
  EXPECT_EQ(a.kinks[0].location, 0.0);
  EXPECT_EQ(a.kinks[0].slope_jump, 1.0);
  EXPECT_EQ(a.deriv(0.0), 1.0);  // right limit at the kink
}

TEST(Builtin, IdentityIsLinear) {
  const Activation a = builtin("identity");
  EXPECT_TRUE(a.kinks.empty());
  for (double x : {-3.0, 0.0, 2.5}) {
    EXPECT_EQ(a.value(x), x);
    EXPECT_EQ(a.deriv(x), 1.0);
  }
}

TEST(Builtin, StableEvaluationFarInTheTails) {
  for (const std::string& n : {"sigmoid", "swish", "gelu", "mish", "telu", "tanh"}) {
    const Activation a = builtin(n);
    for (double x : {-800.0, -40.0, 40.0, 800.0}) {
      EXPECT_TRUE(std::isfinite(a.value(x))) << n << " x=" << x;
      EXPECT_TRUE(std::isfinite(a.deriv(x))) << n << " x=" << x;
    }
  }
  EXPECT_DOUBLE_EQ(builtin("telu").value(25.0), 25.0);
  EXPECT_DOUBLE_EQ(builtin("mish").value(50.0), 50.0 * std::tanh(50.0));
}

TEST(Builtin, GeluUsesTheExactNormalCdf) {
  const Activation a = builtin("gelu");
  EXPECT_NEAR(a.value(1.0), 0.8413447460685429, 1e-15);
  EXPECT_NEAR(a.value(-2.0), -2.0 * 0.022750131948179195, 1e-15);
}

TEST(Builtin, RegistryErrors) {
  EXPECT_THROW(builtin("softsign"), RegistryError);
  EXPECT_THROW(builtin(""), RegistryError);
  EXPECT_THROW(builtin("leaky_relu(1.5)"), ArgumentError);
  EXPECT_THROW(builtin("leaky_relu(0)"), ArgumentError);
  EXPECT_THROW(leaky_relu(-0.1), ArgumentError);
  EXPECT_THROW(poly(0), ArgumentError);
}

TEST(AffineWrap, ScalesSlopeVariation) {
  const Activation w = affine_wrap(builtin("relu"), {3.0, 0.0, 2.0, 0.0});
  EXPECT_DOUBLE_EQ(*w.tv_analytic, 6.0);
  EXPECT_DOUBLE_EQ(w.value(1.0), 6.0);
  EXPECT_DOUBLE_EQ(w.deriv(1.0), 6.0);
}

TEST(AffineWrap, NegativeInputScaleSwapsSlopes) {
  const Activation w = affine_wrap(builtin("relu"), {-1.0, 0.0, 1.0, 0.0});
  EXPECT_EQ(*w.alpha_plus, 0.0);
  EXPECT_EQ(*w.alpha_minus, -1.0);
  EXPECT_FALSE(std::signbit(*w.alpha_plus));
  EXPECT_EQ(w.c_phi, Finiteness::finite);
}

TEST(AffineWrap, OutputShiftMakesTailInfinite) {
  for (const std::string& n : {"relu", "swish", "tanh"}) {
    EXPECT_EQ(affine_wrap(builtin(n), {1.0, 0.0, 1.0, 0.5}).c_phi, Finiteness::infinite) << n;
  }
}

TEST(AffineWrap, KinksMoveWithTheInputMap) {
  const Activation w = affine_wrap(builtin("relu"), {2.0, -1.0, 1.5, 0.0});
  ASSERT_EQ(w.kinks.size(), 1u);
  EXPECT_DOUBLE_EQ(w.kinks[0].location, 0.5);
  EXPECT_DOUBLE_EQ(w.kinks[0].slope_jump, 3.0);
  EXPECT_NEAR(w.deriv(0.5 + 1e-8) - w.deriv(0.5 - 1e-8), 3.0, 1e-12);
}

TEST(AffineWrap, ComposingWithTheInverseRecoversTheBase) {
  const AffineParams p{1.7, 0.0, -0.6, 0.0};
  const AffineParams inv{1.0 / p.a, 0.0, 1.0 / p.c, 0.0};
  for (const std::string& n : {"relu", "tanh", "gelu", "mish"}) {
    const Activation base = builtin(n);
    const Activation back = affine_wrap(affine_wrap(base, p), inv);
    for (int i = 0; i < 64; ++i) {
      const double x = -6.0 + 12.0 * i / 63.0;
      EXPECT_NEAR(back.value(x), base.value(x), 1e-12) << n << " x=" << x;
    }
  }
}

TEST(AffineWrap, RejectsDegenerateParameters) {
  EXPECT_THROW(affine_wrap(builtin("relu"), {0.0, 0.0, 1.0, 0.0}), ArgumentError);
  EXPECT_THROW(affine_wrap(builtin("relu"), {1.0, 0.0, 0.0, 0.0}), ArgumentError);
}

TEST(Classify, TaxonomyLabels) {
  EXPECT_EQ(classify(builtin("sigmoid")).label(), "A0 (bounded, saturating)");
  EXPECT_EQ(classify(builtin("tanh")).label(), "A0 (bounded, saturating)");
  EXPECT_EQ(classify(builtin("leaky_relu(0.2)")).label(), "A1 (linear-growth, asymmetric)");
  EXPECT_EQ(classify(builtin("relu")).label(), "A1 (linear-growth, asymmetric)");
  EXPECT_EQ(classify(builtin("gelu")).label(), "A1 (linear-growth, smooth)");
  EXPECT_EQ(classify(builtin("poly(3)")).cls, TaxonomyClass::A_gt1);
}

TEST(Classify, UnsetSlopesAreAMetadataError) {
  Activation a = builtin("tanh");
  a.alpha_plus.reset();
  EXPECT_THROW(classify(a), MetadataError);
}

}  // namespace

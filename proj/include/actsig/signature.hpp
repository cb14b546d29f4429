#pragma once

#include <string>
#include <vector>

#include "actsig/activation.hpp"
#include "actsig/quadrature.hpp"

namespace actsig {

/// E[f(X)] for X ~ law, routed through the kink-aware integrator when the
/// activation has slope jumps and through plain Gauss-Hermite otherwise.
double expect(const Activation& act, const GaussianLaw& law, const QuadratureRule& rule, const RealFn& f);

/// Gaussian expectations of phi under an arbitrary (possibly shifted) law
/// Y ~ N(b, s^2). The `centered_*` moments weight by (Y - b).
struct LawMoments {
  double e_phi = 0;             ///< E[phi(Y)]
  double e_phi2 = 0;            ///< E[phi(Y)^2]
  double e_dphi = 0;            ///< E[phi'(Y)]
  double e_dphi2 = 0;           ///< E[phi'(Y)^2]
  double e_dphi4 = 0;           ///< E[phi'(Y)^4]
  double centered_phi = 0;      ///< E[(Y-b) phi(Y)]
  double centered_dphi = 0;     ///< E[(Y-b) phi'(Y)]
  double centered_phi_dphi = 0; ///< E[(Y-b) phi(Y) phi'(Y)]
};

LawMoments law_moments(const Activation& act, const GaussianLaw& law, const QuadratureRule& rule);

/// The five propagation statistics plus the auxiliary g4 and dm2/dsigma.
struct GaussianComponents {
  double m1;
  double g1;
  double g2;
  double m2;
  double eta;
  double g4;
  double m2_prime;
};

/// Components under Z ~ N(0, sigma^2). m2_prime = E[2 phi(Z) phi'(Z) Z] / sigma.
GaussianComponents gaussian_components(const Activation& act, double sigma, const QuadratureRule& rule);

/// m2(sigma) = E[phi(Z)^2] alone; m2(0) = phi(0)^2.
double second_moment(const Activation& act, double sigma, const QuadratureRule& rule);

/// The nine-dimensional signature at scale sigma plus g4 and m2'.
/// Extended-real components use +inf for infinity and NaN for "not determined".
struct Signature {
  std::string name;
  double sigma = 0;
  double m1 = 0;
  double g1 = 0;
  double g2 = 0;
  double m2 = 0;
  double eta = 0;
  double alpha_plus = 0;
  double alpha_minus = 0;
  double tv = 0;
  double c_phi = 0;
  double g4 = 0;
  double m2_prime = 0;
  int order = 0;
};

/// Throws InvariantError naming the first violated inequality:
/// m2 >= m1^2, g2 >= |g1|, g4 >= g2 (each with 1e-10 slack) and
/// |eta - sigma^2 g1| <= 1e-8 max(1, |eta|).
void check_invariants(const Signature& s);

/// Composes gaussian_components, tv_slope, compensated_primitive and the
/// slope metadata. Errors from a component are re-thrown with its name.
Signature full_signature(const Activation& act, double sigma, const QuadratureRule& rule);
Signature full_signature(const Activation& act, double sigma, int order = kDefaultOrder);

/// Base-activation quantities needed to transport a signature through
/// phi~(x) = c phi(a x + b) + d: expectations under Y ~ N(b, (|a| sigma)^2)
/// plus the base slopes, slope variation and C.
struct ShiftedSignature {
  std::string name;
  LawMoments moments;
  double alpha_plus = 0;
  double alpha_minus = 0;
  double tv = 0;
  double c_phi = 0;
  int order = 0;
};

ShiftedSignature shifted_signature(const Activation& base, const AffineParams& p, double sigma,
                                   const QuadratureRule& rule);

/// Closed-form transport of a signature under an affine reparameterization.
/// C is +inf when d != 0 or when the input shift moves a nonzero asymptote,
/// |c|/|a| C(phi) when b = 0, and NaN otherwise (finite but not determined).
Signature affine_signature_law(const ShiftedSignature& base, const AffineParams& p, double sigma);

/// Gaussian components for every (activation, sigma) pair, activation-major.
struct ComponentRow {
  std::string name;
  double sigma;
  GaussianComponents c;
};

std::vector<ComponentRow> component_table(const std::vector<Activation>& acts, const std::vector<double>& sigmas,
                                          const QuadratureRule& rule);
std::vector<ComponentRow> component_table_serial(const std::vector<Activation>& acts,
                                                 const std::vector<double>& sigmas, const QuadratureRule& rule);

/// Full signatures for every (activation, sigma) pair, activation-major.
std::vector<Signature> signature_batch(const std::vector<Activation>& acts, const std::vector<double>& sigmas,
                                       const QuadratureRule& rule);
std::vector<Signature> signature_batch_serial(const std::vector<Activation>& acts, const std::vector<double>& sigmas,
                                              const QuadratureRule& rule);

}  // namespace actsig

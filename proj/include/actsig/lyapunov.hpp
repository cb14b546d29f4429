#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "actsig/activation.hpp"
#include "actsig/quadrature.hpp"

namespace actsig {

/// Contraction data for the scalar map T(x) = phi(a x + b).
struct ContractionCertificate {
  double a = 0;
  double b = 0;
  double sup_slope = 0;
  bool sup_slope_approximate = false;  ///< taken from a grid on [-100, 100], not metadata
  double lipschitz_T = 0;              ///< |a| sup|phi'|
  double x_star = 0;                   ///< NaN unless is_contraction
  double descent_constant = 0;         ///< (1 + L) / (2 (1 - L)); NaN unless is_contraction
  double conservative_constant = 0;    ///< (1 - L) / (2 (1 + L)); NaN unless is_contraction
  bool is_contraction = false;
  double sigma_ref = 0;
  double l2_gain = 0;  ///< |a| g2(sigma_ref)
};

/// Descent constant (1 + L) / (2 (1 - L)) for a Lipschitz constant L < 1.
double descent_constant(double lipschitz);

/// Constant (1 - L) / (2 (1 + L)), which follows from |T x - x| <= (1 + L)|x - x*|
/// and therefore holds for every L-contraction.
double conservative_descent_constant(double lipschitz);

ContractionCertificate certify_contraction(const Activation& act, double a, double b, double sigma_ref,
                                           const QuadratureRule& rule);

struct ProbeViolation {
  double x;
  double lhs;
  double rhs;
};

struct DescentReport {
  bool passed = true;
  std::size_t probes = 0;
  double worst_slack = 0;  ///< min over probes of rhs + tolerance - lhs
  double worst_x = 0;
  std::vector<ProbeViolation> violations;
};

/// Checks V(T x) - V(x) <= -c |T x - x|^2 + 1e-12 at every probe, with
/// V(x) = (x - x*)^2 / 2 and c the certificate's descent constant unless an
/// explicit constant is supplied. Throws ArgumentError for a non-contraction.
DescentReport verify_descent(const ContractionCertificate& cert, const Activation& act,
                             const std::vector<double>& probes, std::optional<double> constant = std::nullopt);

/// For nondecreasing phi with phi(0) = 0 and sup phi' = L, checks
/// V(T x) - V(x) <= -(lambda - a^2 L)/2 |T x - x|^2 + 1e-10 with
/// T(x) = phi(a x), V(x) = F(a x) - lambda x^2 / 2, F(x) = int_0^x phi.
/// F is accumulated once over the sorted evaluation points. Throws
/// ArgumentError naming the first failed precondition.
DescentReport f_lyapunov_descent(const Activation& act, double a, double lambda, const std::vector<double>& probes);

/// n Chebyshev points of the first kind on [lo, hi], increasing.
std::vector<double> chebyshev_probes(double lo, double hi, int n = 64);

struct L2Entry {
  double h;
  double ratio;      ///< sqrt(E[(phi(Z + h) - phi(Z))^2]) / |h|
  double std_error;  ///< delta-method error of the ratio
  bool holds;        ///< ratio <= g2 + 3 SE (+1e-12 rounding slack)
};

struct L2Report {
  double a;
  double sigma;
  double g2;
  double gain;  ///< |a| g2
  bool contraction;
  std::uint64_t samples;
  std::uint64_t seed;
  std::vector<L2Entry> entries;
  bool all_hold;
};

/// Monte-Carlo check of the Gaussian L2 slope bound at h in {0.1, 0.01, 0.001}.
L2Report l2_contraction_check(const Activation& act, double a, double sigma, std::uint64_t samples,
                              std::uint64_t seed, const QuadratureRule& rule);

}  // namespace actsig

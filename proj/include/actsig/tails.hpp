#pragma once

#include <iosfwd>
#include <vector>

#include "actsig/activation.hpp"

namespace actsig {

/// Default absolute tolerance for tail functionals (TV, C, weighted bound).
inline constexpr double kTailTolerance = 1e-11;

enum class TailVerdict { converged, diverged, capped };

std::string_view to_string(TailVerdict v);

/// Residual D(t) = phi(t) - alpha_+ t 1{t >= 0} - alpha_- t 1{t < 0} and its
/// primitive F_asym(t) = int_0^t D, sampled on windows that double outward
/// from [0, 4] on each side (2048 cells per window, adaptive integration per
/// cell). Points are sorted by t.
///
/// Verdict per side: converged once a window's int|D| falls below abs_tol/10;
/// diverged when a window's int|D| is at least half of the value three
/// doublings earlier (the residual does not decay); capped when the window
/// reaches 200 with neither. The overall verdict is the worst of the two sides.
struct ResidualProfile {
  std::vector<double> t;
  std::vector<double> d_values;
  std::vector<double> f_asym_values;
  double window = 0.0;  ///< largest half-width reached on either side
  TailVerdict verdict = TailVerdict::converged;
};

/// Throws DomainError when either asymptotic slope is unset or infinite.
ResidualProfile residual_profile(const Activation& act, double abs_tol = kTailTolerance);

/// C(phi) = sup |F_asym| with the location of the supremum. When the sup is
/// attained at the truncation boundary of a converged profile it is a limit
/// value and `limit_value` is set. C is +inf for a diverged profile and NaN
/// (undetermined) for a capped one.
struct CompensatedPrimitive {
  double c_phi;
  double argmax_location;
  bool limit_value;
  TailVerdict verdict;
};

CompensatedPrimitive compensated_primitive(const Activation& act, double abs_tol = kTailTolerance);
CompensatedPrimitive compensated_primitive(const ResidualProfile& profile);

/// int_0^inf t |phi'(t) - alpha_+| dt + int_-inf^0 |t| |phi'(t) - alpha_-| dt,
/// an upper bound on C(phi) when the residuals vanish at infinity. Throws
/// DomainError for infinite slopes or an activation whose residuals do not
/// vanish (tail flag not finite).
double weighted_slope_bound(const Activation& act, double abs_tol = kTailTolerance);

/// TV(phi'): the closed form when known, otherwise tv_slope_numeric.
double tv_slope(const Activation& act, double abs_tol = kTailTolerance);

/// int |phi''| over smooth pieces plus the kink jump magnitudes. Returns +inf
/// when the integral keeps growing past the expansion cap. Throws
/// CapabilityError when the activation has no second derivative.
double tv_slope_numeric(const Activation& act, double abs_tol = kTailTolerance);

struct SlopeMomentBounds {
  double g2_bound;
  double g4_bound;
};

/// Absolute moment M_k = E|Z|^k of a standard normal.
double standard_abs_moment(double k);

/// Upper bounds on g2 and g4 for a slope obeying |phi'(x)| <= A + B |x|^r.
SlopeMomentBounds slope_moment_upper_bounds(double A, double B, double r, double sigma);

/// Writes "t,D,F_asym" rows for plotting.
void write_profile_csv(std::ostream& os, const ResidualProfile& profile);

}  // namespace actsig

#include "actsig/tails.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "actsig/errors.hpp"

namespace actsig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kCellsPerWindow = 2048;
constexpr double kFirstWindow = 4.0;

void require_finite_slopes(const Activation& act, const char* who) {
  if (!act.alpha_plus || !act.alpha_minus) {
    throw DomainError(std::string(who) + ": asymptotic slopes of '" + act.name + "' are not set");
  }
  if (!act.has_finite_slopes()) {
    throw DomainError(std::string(who) + ": C(phi) is undefined for '" + act.name +
                      "' (infinite asymptotic slope)");
  }
}

struct SideResult {
  std::vector<double> t;  // outward from 0, excluding 0
  std::vector<double> d;
  std::vector<double> f;
  double window = 0.0;
  TailVerdict verdict = TailVerdict::capped;
};

SideResult trace_side(const RealFn& D, double sign, double abs_tol, double slope_scale) {
  SideResult out;
  std::vector<double> window_mass;
  double lo = 0.0;
  double hi = kFirstWindow;
  double running = 0.0;
  const double base_tol = abs_tol / (16.0 * kCellsPerWindow);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  RealFn g = [&](double s) { return D(sign * s); };
  RealFn abs_g = [&](double s) { return std::abs(D(sign * s)); };
  while (true) {
    const double h = (hi - lo) / kCellsPerWindow;
    double mass = 0.0;
    for (int j = 0; j < kCellsPerWindow; ++j) {
      const double a = lo + j * h;
      const double b = (j + 1 == kCellsPerWindow) ? hi : lo + (j + 1) * h;
      // phi(t) - alpha t cancels to ~eps*|alpha t|; do not ask for more than that
      const double cell_tol = std::max(base_tol, 8.0 * eps * (b - a) * (1.0 + slope_scale * b));
      running += integrate_interval(g, a, b, cell_tol);
      mass += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(abs_g, a, b, 0);
      out.t.push_back(sign * b);
      out.d.push_back(D(sign * b));
      // F_asym(-s) = -int_{-s}^{0} D = -(int_0^s D(-u) du)
      out.f.push_back(sign * running);
    }
    window_mass.push_back(mass);
    out.window = hi;
    const std::size_t k = window_mass.size() - 1;
    if (mass < abs_tol / 10.0) {
      out.verdict = TailVerdict::converged;
      return out;
    }
    if (k >= 3 && mass >= 0.5 * window_mass[k - 3]) {
      out.verdict = TailVerdict::diverged;
      return out;
    }
    if (hi >= kExpansionCap) {
      out.verdict = TailVerdict::capped;
      return out;
    }
    lo = hi;
    hi = std::min(2.0 * hi, kExpansionCap);
  }
}

TailVerdict worse(TailVerdict a, TailVerdict b) {
  auto rank = [](TailVerdict v) { return v == TailVerdict::converged ? 0 : v == TailVerdict::capped ? 1 : 2; };
  return rank(a) >= rank(b) ? a : b;
}

// Integral over the real line honouring the activation's kinks; +inf when
// the tails keep contributing at the expansion cap.
double line_or_inf(const RealFn& f, double abs_tol, const std::vector<double>& breaks) {
  try {
    return integrate_line(f, abs_tol, breaks);
  } catch (const ConvergenceError&) {
    return kInf;
  }
}

/// Sign changes of f on [-kSignScanHalfWidth, kSignScanHalfWidth], located to
/// machine precision. |f| has a kink at each one, and handing them to the
/// integrator as breakpoints keeps the panels smooth.
constexpr double kSignScanHalfWidth = 40.0;
constexpr double kSignScanStep = 1.0 / 64.0;

std::vector<double> sign_changes(const RealFn& f) {
  std::vector<double> roots;
  const int cells = static_cast<int>(2.0 * kSignScanHalfWidth / kSignScanStep);
  double lo = -kSignScanHalfWidth;
  double flo = f(lo);
  for (int i = 1; i <= cells; ++i) {
    const double hi = -kSignScanHalfWidth + i * kSignScanStep;
    const double fhi = f(hi);
    if (fhi == 0.0) {
      roots.push_back(hi);
    } else if (flo != 0.0 && std::signbit(flo) != std::signbit(fhi)) {
      std::uintmax_t iters = 100;
      const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                            boost::math::tools::eps_tolerance<double>(), iters);
      roots.push_back(0.5 * (a + b));
    }
    lo = hi;
    flo = fhi;
  }
  return roots;
}

}  // namespace

std::string_view to_string(TailVerdict v) {
  switch (v) {
    case TailVerdict::converged: return "converged";
    case TailVerdict::diverged: return "diverged";
    case TailVerdict::capped: break;
  }
  return "capped";
}

ResidualProfile residual_profile(const Activation& act, double abs_tol) {
  require_finite_slopes(act, "residual_profile");
  if (!(abs_tol > 0.0)) throw ArgumentError("residual_profile: abs_tol must be positive");
  const double ap = *act.alpha_plus;
  const double am = *act.alpha_minus;
  const RealFn phi = act.value;
  RealFn D = [&](double t) {
    const double v = phi(t) - (t >= 0.0 ? ap : am) * t;
    if (!std::isfinite(v)) throw EvaluationError("residual_profile: non-finite residual", t);
    return v;
  };

  const SideResult right = trace_side(D, 1.0, abs_tol, std::abs(ap));
  const SideResult left = trace_side(D, -1.0, abs_tol, std::abs(am));

  ResidualProfile p;
  const std::size_t n = left.t.size() + 1 + right.t.size();
  p.t.reserve(n);
  p.d_values.reserve(n);
  p.f_asym_values.reserve(n);
  for (std::size_t i = left.t.size(); i-- > 0;) {
    p.t.push_back(left.t[i]);
    p.d_values.push_back(left.d[i]);
    p.f_asym_values.push_back(left.f[i]);
  }
  p.t.push_back(0.0);
  p.d_values.push_back(D(0.0));
  p.f_asym_values.push_back(0.0);
  p.t.insert(p.t.end(), right.t.begin(), right.t.end());
  p.d_values.insert(p.d_values.end(), right.d.begin(), right.d.end());
  p.f_asym_values.insert(p.f_asym_values.end(), right.f.begin(), right.f.end());
  p.window = std::max(left.window, right.window);
  p.verdict = worse(left.verdict, right.verdict);
  return p;
}

CompensatedPrimitive compensated_primitive(const ResidualProfile& profile) {
  if (profile.verdict == TailVerdict::diverged) return {kInf, profile.t.back(), false, profile.verdict};
  std::size_t best = 0;
  for (std::size_t i = 1; i < profile.f_asym_values.size(); ++i) {
    if (std::abs(profile.f_asym_values[i]) > std::abs(profile.f_asym_values[best])) best = i;
  }
  const double c = std::abs(profile.f_asym_values[best]);
  if (profile.verdict == TailVerdict::capped) {
    return {std::numeric_limits<double>::quiet_NaN(), profile.t[best], false, profile.verdict};
  }
  const bool at_boundary = c > 0.0 && (best == 0 || best + 1 == profile.t.size());
  return {c, profile.t[best], at_boundary, profile.verdict};
}

CompensatedPrimitive compensated_primitive(const Activation& act, double abs_tol) {
  return compensated_primitive(residual_profile(act, abs_tol));
}

double weighted_slope_bound(const Activation& act, double abs_tol) {
  require_finite_slopes(act, "weighted_slope_bound");
  if (act.c_phi != Finiteness::finite) {
    throw DomainError("weighted_slope_bound: residuals of '" + act.name + "' do not vanish at infinity");
  }
  const double ap = *act.alpha_plus;
  const double am = *act.alpha_minus;
  const RealFn dphi = act.deriv;
  RealFn g = [&](double t) { return std::abs(t) * std::abs(dphi(t) - (t >= 0.0 ? ap : am)); };
  std::vector<double> breaks = act.kink_locations();
  breaks.push_back(0.0);
  return integrate_line(g, abs_tol, breaks);
}

double tv_slope(const Activation& act, double abs_tol) {
  if (act.tv_analytic) return *act.tv_analytic;
  return tv_slope_numeric(act, abs_tol);
}

double tv_slope_numeric(const Activation& act, double abs_tol) {
  if (!act.second_deriv) {
    throw CapabilityError("tv_slope: '" + act.name + "' has neither a closed-form TV nor a second derivative");
  }
  const RealFn d2 = *act.second_deriv;
  RealFn g = [&](double x) { return std::abs(d2(x)); };
  double jumps = 0.0;
  for (const Kink& k : act.kinks) jumps += std::abs(k.slope_jump);
  std::vector<double> breaks = act.kink_locations();
  const std::vector<double> turns = sign_changes(d2);
  breaks.insert(breaks.end(), turns.begin(), turns.end());
  return line_or_inf(g, abs_tol, breaks) + jumps;
}

double standard_abs_moment(double k) {
  return std::pow(2.0, k / 2.0) * std::tgamma((k + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
}

SlopeMomentBounds slope_moment_upper_bounds(double A, double B, double r, double sigma) {
  if (A < 0.0 || B < 0.0 || r < 0.0) throw ArgumentError("slope_moment_upper_bounds: A, B, r must be nonnegative");
  if (!(sigma > 0.0)) throw ArgumentError("slope_moment_upper_bounds: sigma must be positive");
  const double g2 = std::numbers::sqrt2 *
                    std::sqrt(A * A + B * B * std::pow(sigma, 2.0 * r) * standard_abs_moment(2.0 * r));
  const double g4 = std::pow(2.0, 0.75) *
                    std::pow(std::pow(A, 4) + std::pow(B, 4) * std::pow(sigma, 4.0 * r) * standard_abs_moment(4.0 * r),
                             0.25);
  return {g2, g4};
}

void write_profile_csv(std::ostream& os, const ResidualProfile& profile) {
  os << "t,D,F_asym\n";
  char buf[96];
  for (std::size_t i = 0; i < profile.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", profile.t[i], profile.d_values[i], profile.f_asym_values[i]);
    os << buf;
  }
}

}  // namespace actsig

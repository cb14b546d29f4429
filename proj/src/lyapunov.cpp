#include "actsig/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "actsig/errors.hpp"
#include "actsig/montecarlo.hpp"
#include "actsig/rng.hpp"
#include "actsig/signature.hpp"

namespace actsig {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SupSlope {
  double value;
  bool approximate;
};

SupSlope sup_slope_of(const Activation& act) {
  if (act.sup_slope) return {*act.sup_slope, false};
  constexpr int kPoints = 400001;  // step 5e-4 on [-100, 100]
  double best = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double x = -100.0 + 200.0 * i / (kPoints - 1);
    best = std::max(best, std::abs(act.deriv(x)));
  }
  return {best, true};
}

void record(DescentReport& r, double x, double lhs, double rhs, double tol) {
  const double slack = rhs + tol - lhs;
  if (r.probes == 0 || slack < r.worst_slack) {
    r.worst_slack = slack;
    r.worst_x = x;
  }
  ++r.probes;
  if (!(lhs <= rhs + tol)) {
    r.passed = false;
    r.violations.push_back({x, lhs, rhs});
  }
}

}  // namespace

double descent_constant(double lipschitz) { return (1.0 + lipschitz) / (2.0 * (1.0 - lipschitz)); }

double conservative_descent_constant(double lipschitz) { return (1.0 - lipschitz) / (2.0 * (1.0 + lipschitz)); }

ContractionCertificate certify_contraction(const Activation& act, double a, double b, double sigma_ref,
                                           const QuadratureRule& rule) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw ArgumentError("certify_contraction: a and b must be finite");
  ContractionCertificate cert;
  cert.a = a;
  cert.b = b;
  const SupSlope sup = sup_slope_of(act);
  cert.sup_slope = sup.value;
  cert.sup_slope_approximate = sup.approximate;
  cert.lipschitz_T = std::abs(a) * sup.value;
  cert.is_contraction = cert.lipschitz_T < 1.0;
  cert.sigma_ref = sigma_ref;
  cert.l2_gain = std::abs(a) * gaussian_components(act, sigma_ref, rule).g2;
  cert.x_star = kNaN;
  cert.descent_constant = kNaN;
  cert.conservative_constant = kNaN;
  if (!cert.is_contraction) return cert;

  cert.descent_constant = descent_constant(cert.lipschitz_T);
  cert.conservative_constant = conservative_descent_constant(cert.lipschitz_T);
  auto T = [&](double x) { return act.value(a * x + b); };
  double x = 0.0;
  for (int it = 0; it < 100000; ++it) {
    const double next = T(x);
    x = next;
    if (std::abs(T(x) - x) <= 1e-12) break;
  }
  if (!(std::abs(T(x) - x) <= 1e-12)) {
    throw ConvergenceError("certify_contraction: fixed-point iteration did not reach residual 1e-12",
                           std::abs(T(x) - x));
  }
  cert.x_star = x;
  return cert;
}

DescentReport verify_descent(const ContractionCertificate& cert, const Activation& act,
                             const std::vector<double>& probes, std::optional<double> constant) {
  if (!cert.is_contraction) throw ArgumentError("verify_descent: the certificate is not a contraction");
  const double c = constant.value_or(cert.descent_constant);
  const double xs = cert.x_star;
  auto V = [&](double x) { return 0.5 * (x - xs) * (x - xs); };
  DescentReport r;
  for (double x : probes) {
    const double tx = act.value(cert.a * x + cert.b);
    const double lhs = V(tx) - V(x);
    const double rhs = -c * (tx - x) * (tx - x);
    record(r, x, lhs, rhs, 1e-12 * std::max(1.0, V(tx) + V(x)));
  }
  return r;
}

DescentReport f_lyapunov_descent(const Activation& act, double a, double lambda, const std::vector<double>& probes) {
  if (!(a >= 0.0)) throw ArgumentError("f_lyapunov_descent: a must be nonnegative");
  if (!(std::abs(act.value(0.0)) <= 1e-15)) throw ArgumentError("f_lyapunov_descent: phi(0) must be 0");
  if (!act.sup_slope) throw ArgumentError("f_lyapunov_descent: sup phi' is not known for '" + act.name + "'");
  for (int i = 0; i <= 10000; ++i) {
    const double x = -50.0 + 100.0 * i / 10000.0;
    if (act.deriv(x) < -1e-15) throw ArgumentError("f_lyapunov_descent: phi is not nondecreasing");
  }
  const double L = *act.sup_slope;
  if (!(lambda > a * a * L)) throw ArgumentError("f_lyapunov_descent: lambda must exceed a^2 L");

  // Evaluation points of F: a x and a T(x) for every probe.
  std::vector<double> tx(probes.size());
  std::vector<double> pts{0.0};
  for (std::size_t i = 0; i < probes.size(); ++i) {
    tx[i] = act.value(a * probes[i]);
    pts.push_back(a * probes[i]);
    pts.push_back(a * tx[i]);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> F(pts.size(), 0.0);
  const auto zero = static_cast<std::size_t>(std::find(pts.begin(), pts.end(), 0.0) - pts.begin());
  const RealFn& phi = act.value;
  for (std::size_t i = zero + 1; i < pts.size(); ++i) F[i] = F[i - 1] + integrate_interval(phi, pts[i - 1], pts[i], 1e-14);
  for (std::size_t i = zero; i-- > 0;) F[i] = F[i + 1] - integrate_interval(phi, pts[i], pts[i + 1], 1e-14);
  auto Fat = [&](double z) {
    const auto it = std::lower_bound(pts.begin(), pts.end(), z);
    return F[static_cast<std::size_t>(it - pts.begin())];
  };
  auto V = [&](double x, double ax) { return Fat(ax) - 0.5 * lambda * x * x; };

  const double c = 0.5 * (lambda - a * a * L);
  DescentReport r;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double x = probes[i];
    const double lhs = V(tx[i], a * tx[i]) - V(x, a * x);
    const double rhs = -c * (tx[i] - x) * (tx[i] - x);
    record(r, x, lhs, rhs, 1e-10);
  }
  return r;
}

std::vector<double> chebyshev_probes(double lo, double hi, int n) {
  if (n < 1 || !(hi > lo)) throw ArgumentError("chebyshev_probes: need n >= 1 and hi > lo");
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) {
    x[k] = 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
  }
  return x;
}

L2Report l2_contraction_check(const Activation& act, double a, double sigma, std::uint64_t samples,
                              std::uint64_t seed, const QuadratureRule& rule) {
  if (!(sigma > 0.0)) throw ArgumentError("l2_contraction_check: sigma must be positive");
  if (samples < 2) throw ArgumentError("l2_contraction_check: need at least 2 samples");
  L2Report r;
  r.a = a;
  r.sigma = sigma;
  r.g2 = gaussian_components(act, sigma, rule).g2;
  r.gain = std::abs(a) * r.g2;
  r.contraction = r.gain < 1.0;
  r.samples = samples;
  r.seed = seed;
  r.all_hold = true;
  const CounterRng rng(seed, 0);
  const RealFn& phi = act.value;
  for (double h : {0.1, 0.01, 0.001}) {
    SampleFn sample = [&](std::uint64_t i, double* out) {
      const double z = sigma * rng.normals(i / 2)[i % 2];
      const double d = phi(z + h) - phi(z);
      out[0] = d * d;
    };
    const RunningStats s = chunked_stats(samples, 1, sample).front();
    const double root = std::sqrt(s.mean);
    L2Entry e;
    e.h = h;
    e.ratio = root / h;
    e.std_error = root > 0.0 ? s.std_error() / (2.0 * root * h) : 0.0;
    e.holds = e.ratio <= r.g2 + 3.0 * e.std_error + 1e-12;
    r.all_hold = r.all_hold && e.holds;
    r.entries.push_back(e);
  }
  return r;
}

}  // namespace actsig

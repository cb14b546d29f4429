#include "actsig/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "actsig/errors.hpp"

namespace actsig {

GaussianLaw::GaussianLaw(double mean, double std) : mean_(mean), std_(std) {
  if (!(std > 0.0) || !std::isfinite(std) || !std::isfinite(mean)) {
    throw ArgumentError("GaussianLaw: std must be positive and finite, mean finite");
  }
}

namespace {

// Orthonormal Hermite polynomials p_j with p_0 = pi^{-1/4}, evaluated by the
// three-term recurrence. Values are kept scaled by 2^{-exponent} so the
// recurrence survives |x| up to the largest root of order 1024.
struct HermiteValues {
  double p_n;
  double p_nm1;
  int exponent;
};

HermiteValues evaluate_orthonormal(int n, double x) {
  constexpr int kRescale = 512;
  double p_prev = 0.0;
  double p = 1.0 / std::pow(std::numbers::pi, 0.25);
  int exponent = 0;
  for (int j = 1; j <= n; ++j) {
    const double next = x * std::sqrt(2.0 / j) * p - std::sqrt(double(j - 1) / j) * p_prev;
    p_prev = p;
    p = next;
    if (std::abs(p) > std::ldexp(1.0, kRescale)) {
      p = std::ldexp(p, -kRescale);
      p_prev = std::ldexp(p_prev, -kRescale);
      exponent += kRescale;
    }
  }
  return {p, p_prev, exponent};
}

// Tricomi-type asymptotic guess for the k-th positive root counted from the
// origin (k = 1 is the smallest positive root).
double tricomi_guess(int n, int k) {
  const int m = n / 2;
  const double nu = 2.0 * n + 1.0;
  const double target = (4.0 * m - 4.0 * k + 3.0) * std::numbers::pi / nu;
  // t - sin t = target has a unique root on [0, pi].
  auto fn = [target](double t) { return t - std::sin(t) - target; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t max_iter = 200;
  auto [lo, hi] = boost::math::tools::bisect(fn, 0.0, std::numbers::pi, tol, max_iter);
  const double t = 0.5 * (lo + hi);
  return std::sqrt(nu) * std::cos(t / 2.0);
}

double newton_root(int n, double x) {
  for (int it = 0; it < 100; ++it) {
    const HermiteValues h = evaluate_orthonormal(n, x);
    const double dp = std::sqrt(2.0 * n) * h.p_nm1;
    const double step = h.p_n / dp;
    x -= step;
    if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(x))) {
      // one polishing step at full precision
      const HermiteValues g = evaluate_orthonormal(n, x);
      return x - g.p_n / (std::sqrt(2.0 * n) * g.p_nm1);
    }
  }
  throw ConvergenceError("build_rule: Newton refinement of Hermite root did not converge", x);
}

double christoffel_weight(int n, double x) {
  // w = 2 / p_n'(x)^2 with p_n' = sqrt(2n) p_{n-1}; computed in log space
  const HermiteValues h = evaluate_orthonormal(n, x);
  const double log_abs = std::log(std::abs(h.p_nm1)) + h.exponent * std::numbers::ln2;
  return std::exp(-std::log(double(n)) - 2.0 * log_abs);
}

struct Panel {
  double estimate;
  double error;  ///< |K15 - G7| on [a, b]
  double l1;     ///< K15 estimate of the integral of |f|
};

// One Gauss-Kronrod 7/15 panel from Boost's node tables. (Boost's own
// non-adaptive call reports the error on the reference interval [-1, 1],
// unscaled, so the pair is evaluated here.)
Panel gk15_panel(const RealFn& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double f0 = f(mid);
  double kronrod = f0 * wk[0];
  double gauss = f0 * wg[0];
  double l1 = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(mid + half * x[i]);
    const double fm = f(mid - half * x[i]);
    kronrod += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 0) gauss += (fp + fm) * wg[i / 2];
  }
  return {half * kronrod, half * std::abs(kronrod - gauss), half * l1};
}

// Recursive bisection with a shared panel budget: an integrand whose error
// estimate is dominated by rounding noise cannot trigger runaway refinement.
struct PanelBudget {
  int remaining = 1 << 16;
};

double adaptive(const RealFn& f, double a, double b, double abs_tol, int depth, PanelBudget& budget) {
  const Panel p = gk15_panel(f, a, b);
  const double est = p.estimate;
  if (!std::isfinite(est)) {
    throw EvaluationError("integrate_interval: non-finite integrand on panel", 0.5 * (a + b));
  }
  // rounding in the integrand values limits the attainable accuracy to ~eps * int|f|
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * p.l1;
  if (p.error <= std::max(abs_tol, roundoff) || depth >= 40 || budget.remaining <= 0) return est;
  budget.remaining -= 2;
  const double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * abs_tol, depth + 1, budget) +
         adaptive(f, mid, b, 0.5 * abs_tol, depth + 1, budget);
}

double adaptive(const RealFn& f, double a, double b, double abs_tol) {
  PanelBudget budget;
  return adaptive(f, a, b, abs_tol, 0, budget);
}

}  // namespace

QuadratureRule build_rule(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw ArgumentError("build_rule: order must lie in [1, " + std::to_string(kMaxOrder) + "], got " +
                        std::to_string(order));
  }
  const int m = order / 2;
  std::vector<double> positive(m);
  for (int k = 1; k <= m; ++k) {
    positive[k - 1] = newton_root(order, tricomi_guess(order, k));
  }
  for (int k = 1; k < m; ++k) {
    if (!(positive[k] > positive[k - 1])) {
      throw ConvergenceError("build_rule: Newton iteration collapsed two Hermite roots", positive[k]);
    }
  }

  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int k = 0; k < m; ++k) {
    const double x = positive[k];
    const double w = christoffel_weight(order, x);
    rule.nodes[order - m + k] = x;
    rule.nodes[m - 1 - k] = -x;
    rule.weights[order - m + k] = w;
    rule.weights[m - 1 - k] = w;
  }
  if (order % 2 == 1) {
    rule.nodes[m] = 0.0;
    rule.weights[m] = christoffel_weight(order, 0.0);
  }
  return rule;
}

double gauss_expect(const QuadratureRule& rule, const GaussianLaw& law, const RealFn& f) {
  const int n = rule.order;
  const double scale = std::numbers::sqrt2 * law.std();
  auto eval = [&](int i) {
    const double x = law.mean() + scale * rule.nodes[i];
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw EvaluationError("gauss_expect: non-finite integrand at node " + std::to_string(i) +
                                " (x = " + std::to_string(x) + ")",
                            x);
    }
    return v;
  };
  double sum = 0.0;
  for (int i = 0; i < n / 2; ++i) {
    if (rule.weights[i] == 0.0) continue;
    sum += rule.weights[i] * (eval(i) + eval(n - 1 - i));
  }
  if (n % 2 == 1) sum += rule.weights[n / 2] * eval(n / 2);
  return sum / std::sqrt(std::numbers::pi);
}

double gauss_expect(const QuadratureRule& rule, const GaussianLaw& law, const RealFn& f,
                    std::span<const double> breakpoints) {
  constexpr double kHalfWidth = 40.0;  // standard normal density below 1e-347 beyond
  std::vector<double> edges;
  for (double b : breakpoints) {
    const double u = (b - law.mean()) / law.std();
    if (std::abs(u) < kHalfWidth) edges.push_back(u);
  }
  if (edges.empty()) return gauss_expect(rule, law, f);

  for (double u = -kHalfWidth; u <= kHalfWidth; u += 2.0) edges.push_back(u);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-14; }),
              edges.end());

  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  RealFn integrand = [&](double u) {
    const double x = law.mean() + law.std() * u;
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw EvaluationError("gauss_expect: non-finite integrand at x = " + std::to_string(x), x);
    }
    return v * std::exp(-0.5 * u * u) * inv_sqrt_2pi;
  };

  // First pass fixes the magnitude; second pass refines against it.
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    RealFn absf = [&](double u) { return std::abs(integrand(u)); };
    l1 += gk15_panel(absf, edges[i], edges[i + 1]).estimate;
  }
  const double panel_tol = std::max(1e-300, 1e-16 * l1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    total += adaptive(integrand, edges[i], edges[i + 1], panel_tol);
  }
  return total;
}

double integrate_interval(const RealFn& f, double a, double b, double abs_tol) {
  if (!(abs_tol > 0.0)) throw ArgumentError("integrate_interval: abs_tol must be positive");
  if (a == b) return 0.0;
  if (a > b) return -integrate_interval(f, b, a, abs_tol);
  return adaptive(f, a, b, abs_tol);
}

double integrate_ray(const RealFn& f, double origin, Direction dir, double abs_tol) {
  if (!(abs_tol >= 1e-13)) throw ArgumentError("integrate_ray: abs_tol must be at least 1e-13");
  const double sign = dir == Direction::positive ? 1.0 : -1.0;
  RealFn g = [&](double s) { return f(origin + sign * s); };

  double lo = 0.0;
  double hi = 8.0;
  double total = integrate_interval(g, lo, hi, abs_tol / 4.0);
  double last = std::abs(total);
  while (true) {
    lo = hi;
    hi = std::min(2.0 * hi, kExpansionCap);
    const double panel = integrate_interval(g, lo, hi, abs_tol / 4.0);
    total += panel;
    last = std::abs(panel);
    if (last < abs_tol / 10.0) return total;
    if (hi >= kExpansionCap) {
      throw ConvergenceError("integrate_ray: tail still contributes " + std::to_string(last) +
                                 " at the expansion cap L = 200",
                             last);
    }
  }
}

double integrate_line(const RealFn& f, double abs_tol, std::span<const double> breakpoints) {
  if (!(abs_tol >= 1e-13)) throw ArgumentError("integrate_line: abs_tol must be at least 1e-13");
  double right = 0.0;
  double left = 0.0;
  std::vector<double> pos{0.0};
  std::vector<double> neg{0.0};
  for (double b : breakpoints) {
    if (b > 0.0 && b < kExpansionCap) pos.push_back(b);
    if (b < 0.0 && b > -kExpansionCap) neg.push_back(-b);
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  // integrate up to the last breakpoint piecewise, then hand the rest to the ray
  for (std::size_t i = 0; i + 1 < pos.size(); ++i) right += integrate_interval(f, pos[i], pos[i + 1], abs_tol / 8.0);
  for (std::size_t i = 0; i + 1 < neg.size(); ++i) left += integrate_interval(f, -neg[i + 1], -neg[i], abs_tol / 8.0);
  right += integrate_ray(f, pos.back(), Direction::positive, abs_tol / 2.0);
  left += integrate_ray(f, -neg.back(), Direction::negative, abs_tol / 2.0);
  return left + right;
}

}  // namespace actsig

#include "actsig/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>

#include <boost/math/tools/roots.hpp>

#include "actsig/errors.hpp"
#include "actsig/signature.hpp"
#include "actsig/tails.hpp"

namespace actsig {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Verdicts are strict inequalities; a margin keeps exactly-marginal maps
// (f' = 1 up to rounding) on the unstable side.
constexpr double kStabilityMargin = 1e-12;

// Smallest variance at which the derivative of the map is evaluated.
constexpr double kVarianceFloor = 1e-12;

void check_map_args(double sigma_w, double sigma_b) {
  if (!(sigma_w > 0.0) || !std::isfinite(sigma_w)) throw ArgumentError("sigma_w must be positive");
  if (!(sigma_b >= 0.0) || !std::isfinite(sigma_b)) throw ArgumentError("sigma_b must be nonnegative");
}

void fill_cells(const Activation& act, const std::vector<double>& ws, const std::vector<double>& bs,
                const QuadratureRule& rule, const FixedPointOptions& opt, std::vector<CriticalityCell>& cells,
                std::size_t row) {
  for (std::size_t j = 0; j < bs.size(); ++j) {
    const FixedPointReport r = solve_fixed_point(act, ws[row], bs[j], rule, opt);
    cells[row * bs.size() + j] = {ws[row], bs[j], r.q_star, r.f_prime, r.variance_stable, r.perturbation_stable,
                                  r.converged, false};
  }
}

void mark_boundaries(CriticalityGrid& g) {
  const std::size_t nw = g.sigma_w_axis.size();
  const std::size_t nb = g.sigma_b_axis.size();
  auto differs = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    const CriticalityCell& a = g.cells[i * nb + j];
    const CriticalityCell& b = g.cells[k * nb + l];
    return a.variance_stable != b.variance_stable || a.perturbation_stable != b.perturbation_stable;
  };
  for (std::size_t i = 0; i < nw; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      bool edge = false;
      if (i > 0) edge |= differs(i, j, i - 1, j);
      if (i + 1 < nw) edge |= differs(i, j, i + 1, j);
      if (j > 0) edge |= differs(i, j, i, j - 1);
      if (j + 1 < nb) edge |= differs(i, j, i, j + 1);
      g.cells[i * nb + j].boundary = edge;
    }
  }
}

CriticalityGrid scan_impl(const Activation& act, const GridAxis& sw, const GridAxis& sb, const QuadratureRule& rule,
                          const FixedPointOptions& opt, bool parallel) {
  if (sw.count < 1 || sb.count < 1) throw ArgumentError("criticality_scan: each axis needs at least 1 point");
  if (!(sw.start > 0.0) || !(sw.end > 0.0)) throw ArgumentError("criticality_scan: sigma_w range must be positive");
  if (sb.start < 0.0 || sb.end < 0.0) throw ArgumentError("criticality_scan: sigma_b range must be nonnegative");
  CriticalityGrid g;
  g.sigma_w_axis = sw.values();
  g.sigma_b_axis = sb.values();
  g.cells.resize(g.sigma_w_axis.size() * g.sigma_b_axis.size());
  const auto rows = static_cast<std::int64_t>(g.sigma_w_axis.size());
  if (parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < rows; ++i) {
      try {
        fill_cells(act, g.sigma_w_axis, g.sigma_b_axis, rule, opt, g.cells, static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(actsig_scan_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::int64_t i = 0; i < rows; ++i) {
      fill_cells(act, g.sigma_w_axis, g.sigma_b_axis, rule, opt, g.cells, static_cast<std::size_t>(i));
    }
  }
  mark_boundaries(g);
  return g;
}

}  // namespace

double variance_map(const Activation& act, double q, double sigma_w, double sigma_b, const QuadratureRule& rule) {
  if (!(q >= 0.0)) throw ArgumentError("variance_map: q must be nonnegative");
  check_map_args(sigma_w, sigma_b);
  return sigma_w * sigma_w * second_moment(act, std::sqrt(q), rule) + sigma_b * sigma_b;
}

FixedPointReport solve_fixed_point(const Activation& act, double sigma_w, double sigma_b, const QuadratureRule& rule,
                                   const FixedPointOptions& opt) {
  check_map_args(sigma_w, sigma_b);
  if (!(opt.q0 >= 0.0)) throw ArgumentError("solve_fixed_point: q0 must be nonnegative");
  if (!(opt.tol > 0.0)) throw ArgumentError("solve_fixed_point: tol must be positive");
  if (opt.max_iters < 1) throw ArgumentError("solve_fixed_point: max_iters must be positive");

  auto f = [&](double q) { return variance_map(act, q, sigma_w, sigma_b, rule); };
  FixedPointReport r;
  r.trajectory.push_back(opt.q0);
  double q = opt.q0;
  for (int it = 1; it <= opt.max_iters; ++it) {
    const double next = f(q);
    r.trajectory.push_back(next);
    r.iterations = it;
    if (!std::isfinite(next) || next > opt.escape) {
      r.diverged = true;
      r.q_star = next;
      r.f_prime = kNaN;
      return r;
    }
    if (std::abs(next - q) <= opt.tol * std::max(1.0, q)) {
      r.converged = true;
      r.q_star = next;
      break;
    }
    const std::size_t n = r.trajectory.size();
    if (n >= 3 && std::abs(next - r.trajectory[n - 3]) <= opt.tol * std::max(1.0, next)) {
      // a 2-cycle brackets the fixed point: g(lo) and g(hi) have opposite signs
      const double lo = std::min(q, next);
      const double hi = std::max(q, next);
      auto g = [&](double x) { return f(x) - x; };
      boost::math::tools::eps_tolerance<double> stop(50);
      std::uintmax_t iters = 200;
      const auto [a, b] = boost::math::tools::bisect(g, lo, hi, stop, iters);
      r.q_star = 0.5 * (a + b);
      r.converged = true;
      r.used_bisection = true;
      break;
    }
    q = next;
  }
  if (!r.converged) {
    r.q_star = r.trajectory.back();
    r.f_prime = kNaN;
    return r;
  }
  const double s = std::sqrt(std::max(r.q_star, kVarianceFloor));
  const GaussianComponents c = gaussian_components(act, s, rule);
  r.f_prime = sigma_w * sigma_w * c.m2_prime / (2.0 * s);
  r.variance_stable = std::abs(r.f_prime) < 1.0 - kStabilityMargin;
  r.perturbation_stable = sigma_w * c.g2 < 1.0 - kStabilityMargin;
  return r;
}

double GridAxis::at(int i) const {
  if (count == 1) return start;
  if (i == count - 1) return end;
  return start + (end - start) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::vector<double> GridAxis::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = at(i);
  return v;
}

CriticalityGrid criticality_scan(const Activation& act, const GridAxis& sigma_w, const GridAxis& sigma_b,
                                 const QuadratureRule& rule, const FixedPointOptions& opt) {
  return scan_impl(act, sigma_w, sigma_b, rule, opt, true);
}

CriticalityGrid criticality_scan_serial(const Activation& act, const GridAxis& sigma_w, const GridAxis& sigma_b,
                                        const QuadratureRule& rule, const FixedPointOptions& opt) {
  return scan_impl(act, sigma_w, sigma_b, rule, opt, false);
}

void write_grid_csv(std::ostream& os, const CriticalityGrid& grid) {
  os << "sigma_w,sigma_b,q_star,f_prime,variance_stable,perturbation_stable,converged\n";
  char buf[160];
  for (const CriticalityCell& c : grid.cells) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%s,%s,%s\n", c.sigma_w, c.sigma_b, c.q_star, c.f_prime,
                  c.variance_stable ? "true" : "false", c.perturbation_stable ? "true" : "false",
                  c.converged ? "true" : "false");
    os << buf;
  }
}

BiasDriftReport bias_drift_check(const Activation& act, double sigma, const QuadratureRule& rule) {
  if (!(sigma > 0.0)) throw ArgumentError("bias_drift_check: sigma must be positive");
  if (!act.has_finite_slopes()) {
    throw DomainError("bias_drift_check: '" + act.name + "' has an infinite or unset asymptotic slope");
  }
  BiasDriftReport r;
  r.m1 = expect(act, GaussianLaw::centered(sigma), rule, act.value);
  r.lhs = std::abs(r.m1 - (*act.alpha_plus - *act.alpha_minus) * sigma / std::sqrt(2.0 * std::numbers::pi));
  r.c_phi = compensated_primitive(act).c_phi;
  if (std::isnan(r.c_phi)) {  // tail verdict undetermined: nothing can be certified
    r.rhs = kNaN;
    r.holds = false;
    return r;
  }
  if (std::isinf(r.c_phi)) {
    r.rhs = kInf;
    r.holds = true;
    return r;
  }
  r.rhs = std::sqrt(2.0 / std::numbers::pi) * r.c_phi / sigma;
  r.holds = r.lhs <= r.rhs + 1e-9;
  return r;
}

double crude_bias_bound(const Activation& act) {
  const RealFn& phi = act.value;
  RealFn g = [&](double x) { return std::abs(phi(x) + phi(-x)); };
  try {
    return integrate_ray(g, 0.0, Direction::positive, 1e-10);
  } catch (const ConvergenceError&) {
    return kInf;
  } catch (const EvaluationError&) {
    return kInf;
  }
}

}  // namespace actsig

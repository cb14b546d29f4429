#pragma once

#include <iosfwd>
#include <vector>

#include "actsig/activation.hpp"
#include "actsig/quadrature.hpp"

namespace actsig {

/// f(q) = sigma_w^2 m2(sqrt q) + sigma_b^2, the mean-field variance map.
double variance_map(const Activation& act, double q, double sigma_w, double sigma_b, const QuadratureRule& rule);

struct FixedPointOptions {
  double q0 = 1.0;
  int max_iters = 5000;
  double tol = 1e-12;
  double escape = 1e12;  ///< q above this counts as divergence
};

struct FixedPointReport {
  double q_star = 0.0;
  double f_prime = 0.0;  ///< NaN when not converged
  bool variance_stable = false;
  bool perturbation_stable = false;
  int iterations = 0;
  std::vector<double> trajectory;  ///< q_0 .. q_iterations
  bool converged = false;
  bool diverged = false;     ///< q escaped past the escape threshold
  bool used_bisection = false;
};

/// Iterates q <- f(q) until |q_{l+1} - q_l| <= tol max(1, q_l). A detected
/// 2-cycle switches to bisection on f(q) - q over the cycle's bracket. On
/// convergence f'(q*) = sigma_w^2 m2'(sqrt q*) / (2 sqrt q*), evaluated at
/// q = 1e-12 when q* is smaller, and the perturbation verdict uses
/// sigma_w g2(sqrt q*).
FixedPointReport solve_fixed_point(const Activation& act, double sigma_w, double sigma_b,
                                   const QuadratureRule& rule, const FixedPointOptions& opt = {});

/// Inclusive range start:end:count; a single-point axis (count 1) is just `start`.
struct GridAxis {
  double start;
  double end;
  int count;
  double at(int i) const;
  std::vector<double> values() const;
};

struct CriticalityCell {
  double sigma_w;
  double sigma_b;
  double q_star;
  double f_prime;
  bool variance_stable;
  bool perturbation_stable;
  bool converged;
  bool boundary;  ///< a 4-neighbour has a different stability verdict
};

struct CriticalityGrid {
  std::vector<double> sigma_w_axis;
  std::vector<double> sigma_b_axis;
  std::vector<CriticalityCell> cells;  ///< row-major: sigma_w outer, sigma_b inner
  const CriticalityCell& at(std::size_t iw, std::size_t ib) const { return cells[iw * sigma_b_axis.size() + ib]; }
};

/// Solves every cell of the (sigma_w, sigma_b) grid; rows run in parallel.
/// Requires count >= 1 on each axis, sigma_w > 0, sigma_b >= 0.
CriticalityGrid criticality_scan(const Activation& act, const GridAxis& sigma_w, const GridAxis& sigma_b,
                                 const QuadratureRule& rule, const FixedPointOptions& opt = {});
CriticalityGrid criticality_scan_serial(const Activation& act, const GridAxis& sigma_w, const GridAxis& sigma_b,
                                        const QuadratureRule& rule, const FixedPointOptions& opt = {});

/// CSV: sigma_w,sigma_b,q_star,f_prime,variance_stable,perturbation_stable,converged
void write_grid_csv(std::ostream& os, const CriticalityGrid& grid);

struct BiasDriftReport {
  double lhs;  ///< |m1(sigma) - (alpha_+ - alpha_-) sigma / sqrt(2 pi)|
  double rhs;  ///< sqrt(2/pi) C(phi) / sigma; +inf when C is infinite
  bool holds;
  double m1;
  double c_phi;
};

/// Throws DomainError for infinite slopes. Holds vacuously when C is infinite.
BiasDriftReport bias_drift_check(const Activation& act, double sigma, const QuadratureRule& rule);

/// int_0^inf |phi(x) + phi(-x)| dx, or +inf when the integral does not converge.
double crude_bias_bound(const Activation& act);

}  // namespace actsig

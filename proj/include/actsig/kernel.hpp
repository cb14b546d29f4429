#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "actsig/activation.hpp"
#include "actsig/montecarlo.hpp"
#include "actsig/quadrature.hpp"

namespace actsig {

using Vec = std::vector<double>;

/// sqrt(3) g4(norm_x) g4(norm_y): bound on the mixed Hessian of
/// K(x, y) = E[phi(w.x) phi(w.y)], w ~ N(0, I).
double g4_bound(const Activation& act, double norm_x, double norm_y, const QuadratureRule& rule);

enum class SlopeRoute {
  automatic,  ///< sup|phi'| when known, else slope variation
  sup_slope,  ///< M = sup|phi'| (throws MetadataError if unknown)
  variation,  ///< M = TV(phi') + |phi'(+inf) - phi'(-inf)|
};

/// sqrt(3) M^2 for a uniform slope bound M. Throws DomainError for
/// unbounded slopes (infinite asymptotic slope or infinite TV).
double bv_bound(const Activation& act, SlopeRoute route = SlopeRoute::automatic);

/// |E[phi'(w.x) phi'(w.y) (w.a) (w.b)]| over w ~ N(0, I_d), i.e. |a' (d_x d_y K) b|.
/// w is sampled only on an orthonormal basis of span{x, y, a, b}; the
/// projections have the same joint law as in full dimension. Throws
/// ArgumentError for mismatched dimensions or non-unit a, b.
EstimateWithError mc_mixed_hessian(const Activation& act, const Vec& x, const Vec& y, const Vec& a, const Vec& b,
                                   std::uint64_t samples, std::uint64_t seed, std::uint64_t stream = 0);

/// Reference estimator drawing all d coordinates of w (serial).
EstimateWithError mc_mixed_hessian_full(const Activation& act, const Vec& x, const Vec& y, const Vec& a,
                                        const Vec& b, std::uint64_t samples, std::uint64_t seed,
                                        std::uint64_t stream = 0);

struct KernelBoundReport {
  int dim = 0;
  double norm_x = 0;
  double norm_y = 0;
  double g4_x = 0;
  double g4_y = 0;
  double bound = 0;                ///< sqrt(3) g4_x g4_y
  std::optional<double> bv_bound;  ///< sqrt(3) M^2 when slopes are bounded
  EstimateWithError mc_estimate;
  bool satisfied = false;  ///< mc value <= min(bound, bv_bound) + 3 SE
};

struct StressResult {
  std::vector<KernelBoundReport> reports;
  int failures = 0;
};

/// Randomized verification: per trial, norms log-uniform on [0.25, 4]
/// (drawn independently of the dimension, so bounds agree across d) and
/// x, y, a, b directions uniform on the sphere. Trial t uses seed + t.
StressResult bound_stress(const Activation& act, int dim, int trials, std::uint64_t samples, std::uint64_t seed,
                          const QuadratureRule& rule);
StressResult bound_stress_serial(const Activation& act, int dim, int trials, std::uint64_t samples,
                                 std::uint64_t seed, const QuadratureRule& rule);

}  // namespace actsig

#include "actsig/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "actsig/errors.hpp"
#include "actsig/rng.hpp"
#include "actsig/signature.hpp"
#include "actsig/tails.hpp"

namespace actsig {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

double dot(const Vec& u, const Vec& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

void validate(const Vec& x, const Vec& y, const Vec& a, const Vec& b) {
  const std::size_t d = x.size();
  if (d == 0 || y.size() != d || a.size() != d || b.size() != d) {
    throw ArgumentError("mc_mixed_hessian: x, y, a, b must share one positive dimension");
  }
  if (std::abs(norm(a) - 1.0) > 1e-12 || std::abs(norm(b) - 1.0) > 1e-12) {
    throw ArgumentError("mc_mixed_hessian: a and b must be unit vectors");
  }
}

// Orthonormal basis of span{vs} by modified Gram-Schmidt.
std::vector<Vec> orthonormal_basis(const std::vector<const Vec*>& vs) {
  std::vector<Vec> basis;
  for (const Vec* v : vs) {
    Vec r = *v;
    const double scale = std::max(norm(r), 1e-300);
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& q : basis) {
        const double c = dot(q, r);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * q[i];
      }
    }
    const double n = norm(r);
    if (n > 1e-12 * scale) {
      for (double& e : r) e /= n;
      basis.push_back(std::move(r));
    }
  }
  return basis;
}

double slope_at_infinity(const Activation& act, double sign) {
  const std::optional<double>& alpha = sign > 0.0 ? act.alpha_plus : act.alpha_minus;
  if (alpha && std::isfinite(*alpha)) return *alpha;
  return act.deriv(sign * 1e6);
}

// Uniform direction on the sphere scaled to the given norm.
Vec random_vector(const CounterRng& rng, int dim, std::uint64_t which, double length) {
  Vec v(dim);
  for (int j = 0; j < dim; ++j) v[j] = rng.normals((which << 20) + j / 2)[j % 2];
  const double n = norm(v);
  for (double& e : v) e *= length / n;
  return v;
}

KernelBoundReport run_trial(const Activation& act, int dim, int trial, std::uint64_t samples, std::uint64_t seed,
                            const QuadratureRule& rule) {
  const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(trial);
  // norms come from their own stream so they do not depend on the dimension
  const auto u = CounterRng(trial_seed, 1).uniforms(0);
  const double nx = 0.25 * std::pow(16.0, u[0]);
  const double ny = 0.25 * std::pow(16.0, u[1]);
  const CounterRng dirs(trial_seed, 2);
  const Vec x = random_vector(dirs, dim, 0, nx);
  const Vec y = random_vector(dirs, dim, 1, ny);
  const Vec a = random_vector(dirs, dim, 2, 1.0);
  const Vec b = random_vector(dirs, dim, 3, 1.0);

  KernelBoundReport r;
  r.dim = dim;
  r.norm_x = nx;
  r.norm_y = ny;
  r.g4_x = gaussian_components(act, nx, rule).g4;
  r.g4_y = gaussian_components(act, ny, rule).g4;
  r.bound = kSqrt3 * r.g4_x * r.g4_y;
  try {
    r.bv_bound = bv_bound(act);
  } catch (const DomainError&) {
  } catch (const MetadataError&) {
  }
  r.mc_estimate = mc_mixed_hessian(act, x, y, a, b, samples, trial_seed, 3);
  const double limit = r.bv_bound ? std::min(r.bound, *r.bv_bound) : r.bound;
  r.satisfied = r.mc_estimate.value <= limit + 3.0 * r.mc_estimate.std_error;
  return r;
}

StressResult stress_impl(const Activation& act, int dim, int trials, std::uint64_t samples, std::uint64_t seed,
                         const QuadratureRule& rule, bool parallel) {
  if (trials < 1) throw ArgumentError("bound_stress: trials must be at least 1");
  if (dim < 1) throw ArgumentError("bound_stress: dim must be at least 1");
  StressResult out;
  out.reports.resize(trials);
  if (parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < trials; ++t) {
      try {
        out.reports[t] = run_trial(act, dim, t, samples, seed, rule);
      } catch (...) {
#pragma omp critical(actsig_stress_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (int t = 0; t < trials; ++t) out.reports[t] = run_trial(act, dim, t, samples, seed, rule);
  }
  for (const KernelBoundReport& r : out.reports) out.failures += r.satisfied ? 0 : 1;
  return out;
}

}  // namespace

double g4_bound(const Activation& act, double norm_x, double norm_y, const QuadratureRule& rule) {
  if (!(norm_x > 0.0) || !(norm_y > 0.0)) throw ArgumentError("g4_bound: norms must be positive");
  return kSqrt3 * gaussian_components(act, norm_x, rule).g4 * gaussian_components(act, norm_y, rule).g4;
}

double bv_bound(const Activation& act, SlopeRoute route) {
  if (!act.has_finite_slopes()) {
    throw DomainError("bv_bound: '" + act.name + "' has an unbounded slope");
  }
  if (route == SlopeRoute::sup_slope && !act.sup_slope) {
    throw MetadataError("bv_bound: sup|phi'| is not known for '" + act.name + "'");
  }
  double M;
  if (act.sup_slope && route != SlopeRoute::variation) {
    M = *act.sup_slope;
  } else {
    const double tv = tv_slope(act);
    if (!std::isfinite(tv)) throw DomainError("bv_bound: TV(phi') of '" + act.name + "' is infinite");
    M = tv + std::abs(slope_at_infinity(act, 1.0) - slope_at_infinity(act, -1.0));
  }
  return kSqrt3 * M * M;
}

EstimateWithError mc_mixed_hessian(const Activation& act, const Vec& x, const Vec& y, const Vec& a, const Vec& b,
                                   std::uint64_t samples, std::uint64_t seed, std::uint64_t stream) {
  validate(x, y, a, b);
  if (samples < 2) throw ArgumentError("mc_mixed_hessian: need at least 2 samples");
  const std::vector<Vec> basis = orthonormal_basis({&x, &y, &a, &b});
  const std::size_t k = basis.size();
  double cx[4] = {}, cy[4] = {}, ca[4] = {}, cb[4] = {};
  for (std::size_t j = 0; j < k; ++j) {
    cx[j] = dot(basis[j], x);
    cy[j] = dot(basis[j], y);
    ca[j] = dot(basis[j], a);
    cb[j] = dot(basis[j], b);
  }
  const CounterRng rng(seed, stream);
  const RealFn& dphi = act.deriv;
  SampleFn sample = [&](std::uint64_t i, double* out) {
    const auto g01 = rng.normals(2 * i);
    const auto g23 = rng.normals(2 * i + 1);
    const double g[4] = {g01[0], g01[1], g23[0], g23[1]};
    double px = 0, py = 0, pa = 0, pb = 0;
    for (std::size_t j = 0; j < k; ++j) {
      px += g[j] * cx[j];
      py += g[j] * cy[j];
      pa += g[j] * ca[j];
      pb += g[j] * cb[j];
    }
    out[0] = dphi(px) * dphi(py) * pa * pb;
  };
  EstimateWithError e = to_estimate(chunked_stats(samples, 1, sample).front(), seed);
  e.value = std::abs(e.value);
  return e;
}

EstimateWithError mc_mixed_hessian_full(const Activation& act, const Vec& x, const Vec& y, const Vec& a,
                                        const Vec& b, std::uint64_t samples, std::uint64_t seed,
                                        std::uint64_t stream) {
  validate(x, y, a, b);
  if (samples < 2) throw ArgumentError("mc_mixed_hessian_full: need at least 2 samples");
  const std::size_t d = x.size();
  const std::uint64_t blocks = (d + 1) / 2;
  const CounterRng rng(seed, stream);
  const RealFn& dphi = act.deriv;
  SampleFn sample = [&](std::uint64_t i, double* out) {
    double px = 0, py = 0, pa = 0, pb = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const double w = rng.normals(i * blocks + j / 2)[j % 2];
      px += w * x[j];
      py += w * y[j];
      pa += w * a[j];
      pb += w * b[j];
    }
    out[0] = dphi(px) * dphi(py) * pa * pb;
  };
  EstimateWithError e = to_estimate(chunked_stats_serial(samples, 1, sample).front(), seed);
  e.value = std::abs(e.value);
  return e;
}

StressResult bound_stress(const Activation& act, int dim, int trials, std::uint64_t samples, std::uint64_t seed,
                          const QuadratureRule& rule) {
  return stress_impl(act, dim, trials, samples, seed, rule, true);
}

StressResult bound_stress_serial(const Activation& act, int dim, int trials, std::uint64_t samples,
                                 std::uint64_t seed, const QuadratureRule& rule) {
  return stress_impl(act, dim, trials, samples, seed, rule, false);
}

}  // namespace actsig

#include "actsig/signature.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "actsig/errors.hpp"
#include "actsig/tails.hpp"

namespace actsig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_sigma(double sigma, const char* who) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ArgumentError(std::string(who) + ": sigma must be positive and finite");
  }
}

// Runs fn and re-throws any library error with the component name prefixed.
template <class Fn>
auto with_component(const std::string& component, Fn&& fn) -> decltype(fn()) {
  const std::string prefix = "full_signature[" + component + "]: ";
  try {
    return fn();
  } catch (const EvaluationError& e) {
    throw EvaluationError(prefix + e.what(), e.location());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(prefix + e.what(), e.last_magnitude());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const CapabilityError& e) {
    throw CapabilityError(prefix + e.what());
  } catch (const MetadataError& e) {
    throw MetadataError(prefix + e.what());
  } catch (const ArgumentError& e) {
    throw ArgumentError(prefix + e.what());
  }
}

double slope_or_nan(const std::optional<double>& v) { return v ? *v : kNaN; }

double c_phi_of(const Activation& act) {
  if (!act.has_finite_slopes()) {
    if (act.c_phi == Finiteness::infinite) return kInf;
    throw DomainError("compensated_primitive: C(phi) is undefined for '" + act.name + "' (infinite slope)");
  }
  return compensated_primitive(act).c_phi;
}

template <class Job>
void run_parallel(int n, Job&& job) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      job(i);
    } catch (...) {
#pragma omp critical(actsig_signature_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

double expect(const Activation& act, const GaussianLaw& law, const QuadratureRule& rule, const RealFn& f) {
  if (act.kinks.empty()) return gauss_expect(rule, law, f);
  const std::vector<double> breaks = act.kink_locations();
  return gauss_expect(rule, law, f, breaks);
}

LawMoments law_moments(const Activation& act, const GaussianLaw& law, const QuadratureRule& rule) {
  const RealFn& phi = act.value;
  const RealFn& dphi = act.deriv;
  const double b = law.mean();
  LawMoments m;
  m.e_phi = expect(act, law, rule, phi);
  m.e_phi2 = expect(act, law, rule, [&](double y) {
    const double v = phi(y);
    return v * v;
  });
  m.e_dphi = expect(act, law, rule, dphi);
  m.e_dphi2 = expect(act, law, rule, [&](double y) {
    const double v = dphi(y);
    return v * v;
  });
  m.e_dphi4 = expect(act, law, rule, [&](double y) {
    const double v = dphi(y);
    return (v * v) * (v * v);
  });
  m.centered_phi = expect(act, law, rule, [&](double y) { return (y - b) * phi(y); });
  m.centered_dphi = expect(act, law, rule, [&](double y) { return (y - b) * dphi(y); });
  m.centered_phi_dphi = expect(act, law, rule, [&](double y) { return (y - b) * phi(y) * dphi(y); });
  return m;
}

GaussianComponents gaussian_components(const Activation& act, double sigma, const QuadratureRule& rule) {
  require_sigma(sigma, "gaussian_components");
  const LawMoments m = law_moments(act, GaussianLaw::centered(sigma), rule);
  return {m.e_phi,
          m.e_dphi,
          std::sqrt(m.e_dphi2),
          m.e_phi2,
          m.centered_phi,
          std::pow(m.e_dphi4, 0.25),
          2.0 * m.centered_phi_dphi / sigma};
}

double second_moment(const Activation& act, double sigma, const QuadratureRule& rule) {
  if (sigma == 0.0) {
    const double v = act.value(0.0);
    return v * v;
  }
  require_sigma(sigma, "second_moment");
  const RealFn& phi = act.value;
  return expect(act, GaussianLaw::centered(sigma), rule, [&](double x) {
    const double v = phi(x);
    return v * v;
  });
}

void check_invariants(const Signature& s) {
  auto fail = [&](const std::string& what) {
    throw InvariantError("signature of '" + s.name + "' at sigma=" + std::to_string(s.sigma) + ": " + what);
  };
  if (!(s.m2 >= s.m1 * s.m1 - 1e-10)) fail("m2 < m1^2 (negative variance)");
  if (!(s.g2 >= std::abs(s.g1) - 1e-10)) fail("g2 < |g1|");
  if (!(s.g4 >= s.g2 - 1e-10)) fail("g4 < g2");
  if (!(std::abs(s.eta - s.sigma * s.sigma * s.g1) <= 1e-8 * std::max(1.0, std::abs(s.eta)))) {
    fail("eta != sigma^2 g1");
  }
}

Signature full_signature(const Activation& act, double sigma, const QuadratureRule& rule) {
  require_sigma(sigma, "full_signature");
  const GaussianComponents g =
      with_component("gaussian_components", [&] { return gaussian_components(act, sigma, rule); });
  Signature s;
  s.name = act.name;
  s.sigma = sigma;
  s.m1 = g.m1;
  s.g1 = g.g1;
  s.g2 = g.g2;
  s.m2 = g.m2;
  s.eta = g.eta;
  s.g4 = g.g4;
  s.m2_prime = g.m2_prime;
  s.alpha_plus = slope_or_nan(act.alpha_plus);
  s.alpha_minus = slope_or_nan(act.alpha_minus);
  s.tv = with_component("tv_slope", [&] { return tv_slope(act); });
  s.c_phi = with_component("compensated_primitive", [&] { return c_phi_of(act); });
  s.order = rule.order;
  check_invariants(s);
  return s;
}

Signature full_signature(const Activation& act, double sigma, int order) {
  return full_signature(act, sigma, build_rule(order));
}

ShiftedSignature shifted_signature(const Activation& base, const AffineParams& p, double sigma,
                                   const QuadratureRule& rule) {
  p.validate();
  require_sigma(sigma, "shifted_signature");
  ShiftedSignature s;
  s.name = base.name;
  s.moments = law_moments(base, GaussianLaw(p.b, std::abs(p.a) * sigma), rule);
  s.alpha_plus = slope_or_nan(base.alpha_plus);
  s.alpha_minus = slope_or_nan(base.alpha_minus);
  s.tv = tv_slope(base);
  s.c_phi = c_phi_of(base);
  s.order = rule.order;
  return s;
}

Signature affine_signature_law(const ShiftedSignature& base, const AffineParams& p, double sigma) {
  p.validate();
  require_sigma(sigma, "affine_signature_law");
  const auto [a, b, c, d] = p;
  const LawMoments& m = base.moments;
  Signature s;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.9g*%s(%.9g*x%+.9g)%+.9g", c, base.name.c_str(), a, b, d);
  s.name = buf;
  s.sigma = sigma;
  s.m1 = c * m.e_phi + d;
  s.m2 = c * c * m.e_phi2 + 2.0 * c * d * m.e_phi + d * d;
  s.g1 = c * a * m.e_dphi;
  s.g2 = std::abs(c * a) * std::sqrt(m.e_dphi2);
  s.g4 = std::abs(c * a) * std::pow(m.e_dphi4, 0.25);
  s.eta = sigma * sigma * s.g1;
  // d/dsigma E[phi~(Z)^2] = 2 E[phi~ phi~' Z] / sigma with Z = (Y - b)/a
  s.m2_prime = (2.0 * c * c * m.centered_phi_dphi + 2.0 * c * d * m.centered_dphi) / sigma;

  auto scale = [&](double alpha) {
    const double v = c * a * alpha;
    return v == 0.0 ? 0.0 : v;
  };
  s.alpha_plus = a > 0.0 ? scale(base.alpha_plus) : scale(base.alpha_minus);
  s.alpha_minus = a > 0.0 ? scale(base.alpha_minus) : scale(base.alpha_plus);
  s.tv = std::abs(c * a) * base.tv;

  const bool finite_slopes = std::isfinite(base.alpha_plus) && std::isfinite(base.alpha_minus);
  const bool shifted_tail = finite_slopes && (base.alpha_plus * b != 0.0 || base.alpha_minus * b != 0.0);
  if (d != 0.0 || shifted_tail || std::isinf(base.c_phi)) {
    s.c_phi = kInf;
  } else if (b == 0.0) {
    s.c_phi = std::abs(c) / std::abs(a) * base.c_phi;
  } else {
    s.c_phi = kNaN;
  }
  s.order = base.order;
  return s;
}

std::vector<ComponentRow> component_table(const std::vector<Activation>& acts, const std::vector<double>& sigmas,
                                          const QuadratureRule& rule) {
  const int ns = static_cast<int>(sigmas.size());
  std::vector<ComponentRow> rows(acts.size() * sigmas.size());
  run_parallel(static_cast<int>(rows.size()), [&](int i) {
    const Activation& act = acts[i / ns];
    rows[i] = {act.name, sigmas[i % ns], gaussian_components(act, sigmas[i % ns], rule)};
  });
  return rows;
}

std::vector<ComponentRow> component_table_serial(const std::vector<Activation>& acts,
                                                 const std::vector<double>& sigmas, const QuadratureRule& rule) {
  std::vector<ComponentRow> rows;
  rows.reserve(acts.size() * sigmas.size());
  for (const Activation& act : acts) {
    for (double s : sigmas) rows.push_back({act.name, s, gaussian_components(act, s, rule)});
  }
  return rows;
}

std::vector<Signature> signature_batch(const std::vector<Activation>& acts, const std::vector<double>& sigmas,
                                       const QuadratureRule& rule) {
  const int ns = static_cast<int>(sigmas.size());
  std::vector<Signature> out(acts.size() * sigmas.size());
  run_parallel(static_cast<int>(out.size()),
               [&](int i) { out[i] = full_signature(acts[i / ns], sigmas[i % ns], rule); });
  return out;
}

std::vector<Signature> signature_batch_serial(const std::vector<Activation>& acts, const std::vector<double>& sigmas,
                                              const QuadratureRule& rule) {
  std::vector<Signature> out;
  out.reserve(acts.size() * sigmas.size());
  for (const Activation& act : acts) {
    for (double s : sigmas) out.push_back(full_signature(act, s, rule));
  }
  return out;
}

}  // namespace actsig

#include "actsig/activation.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "actsig/errors.hpp"

namespace actsig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ln(1 + e^x) without overflow for large x.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double sech2(double x) {
  const double ch = std::cosh(x);
  return 1.0 / (ch * ch);
}

Activation make_relu() {
  Activation a;
  a.name = "relu";
  a.value = [](double x) { return x > 0.0 ? x : 0.0; };
  a.deriv = [](double x) { return x >= 0.0 ? 1.0 : 0.0; };
  a.second_deriv = [](double) { return 0.0; };
  a.kinks = {{0.0, 1.0}};
  a.alpha_plus = 1.0;
  a.alpha_minus = 0.0;
  a.tv_analytic = 1.0;
  a.c_phi = Finiteness::finite;
  a.sup_slope = 1.0;
  return a;
}

Activation make_tanh() {
  Activation a;
  a.name = "tanh";
  a.value = [](double x) { return std::tanh(x); };
  a.deriv = [](double x) { return sech2(x); };
  a.second_deriv = [](double x) { return -2.0 * std::tanh(x) * sech2(x); };
  a.alpha_plus = 0.0;
  a.alpha_minus = 0.0;
  a.tv_analytic = 2.0;
  a.c_phi = Finiteness::infinite;
  a.sup_slope = 1.0;
  return a;
}

Activation make_sigmoid() {
  Activation a;
  a.name = "sigmoid";
  a.value = logistic;
  a.deriv = [](double x) {
    const double s = logistic(x);
    return s * (1.0 - s);
  };
  a.second_deriv = [](double x) {
    const double s = logistic(x);
    return s * (1.0 - s) * (1.0 - 2.0 * s);
  };
  a.alpha_plus = 0.0;
  a.alpha_minus = 0.0;
  a.c_phi = Finiteness::infinite;
  a.sup_slope = 0.25;
  return a;
}

Activation make_swish() {
  Activation a;
  a.name = "swish";
  a.value = [](double x) { return x * logistic(x); };
  a.deriv = [](double x) {
    const double s = logistic(x);
    return s + x * s * (1.0 - s);
  };
  a.second_deriv = [](double x) {
    const double s = logistic(x);
    return s * (1.0 - s) * (2.0 + x * (1.0 - 2.0 * s));
  };
  a.alpha_plus = 1.0;
  a.alpha_minus = 0.0;
  a.c_phi = Finiteness::finite;
  return a;
}

Activation make_gelu() {
  Activation a;
  a.name = "gelu";
  a.value = [](double x) { return x * normal_cdf(x); };
  a.deriv = [](double x) { return normal_cdf(x) + x * normal_pdf(x); };
  a.second_deriv = [](double x) { return (2.0 - x * x) * normal_pdf(x); };
  a.alpha_plus = 1.0;
  a.alpha_minus = 0.0;
  a.c_phi = Finiteness::finite;
  return a;
}

Activation make_mish() {
  Activation a;
  a.name = "mish";
  a.value = [](double x) { return x * std::tanh(softplus(x)); };
  a.deriv = [](double x) {
    const double t = std::tanh(softplus(x));
    const double s = logistic(x);
    return t + x * s * (1.0 - t * t);
  };
  a.second_deriv = [](double x) {
    const double sp = softplus(x);
    const double t = std::tanh(sp);
    const double s = logistic(x);
    return sech2(sp) * s * (2.0 + x * (1.0 - s - 2.0 * t * s));
  };
  a.alpha_plus = 1.0;
  a.alpha_minus = 0.0;
  a.c_phi = Finiteness::finite;
  return a;
}

// tanh(e^x) == 1 in double precision once x > 20, and e^x overflows near 710.
constexpr double kTeluSaturation = 20.0;

Activation make_telu() {
  Activation a;
  a.name = "telu";
  a.value = [](double x) { return x > kTeluSaturation ? x : x * std::tanh(std::exp(x)); };
  a.deriv = [](double x) {
    if (x > kTeluSaturation) return 1.0;
    const double e = std::exp(x);
    return std::tanh(e) + x * e * sech2(e);
  };
  a.second_deriv = [](double x) {
    if (x > kTeluSaturation) return 0.0;
    const double e = std::exp(x);
    return e * sech2(e) * (2.0 + x - 2.0 * x * e * std::tanh(e));
  };
  a.alpha_plus = 1.0;
  a.alpha_minus = 0.0;
  a.c_phi = Finiteness::finite;
  return a;
}

Activation make_identity() {
  Activation a;
  a.name = "identity";
  a.value = [](double x) { return x; };
  a.deriv = [](double) { return 1.0; };
  a.second_deriv = [](double) { return 0.0; };
  a.alpha_plus = 1.0;
  a.alpha_minus = 1.0;
  a.tv_analytic = 0.0;
  a.c_phi = Finiteness::finite;
  a.sup_slope = 1.0;
  return a;
}

// Parses "prefix(number)" and returns the text between the parentheses.
std::optional<std::string_view> parenthesized(std::string_view name, std::string_view prefix) {
  if (name.size() < prefix.size() + 2 || name.substr(0, prefix.size()) != prefix) return std::nullopt;
  if (name[prefix.size()] != '(' || name.back() != ')') return std::nullopt;
  return name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
}

double parse_number(std::string_view text, std::string_view what) {
  const std::string owned(text);
  char* end = nullptr;
  const double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size()) {
    throw RegistryError("builtin: malformed " + std::string(what) + " parameter '" + owned + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(Finiteness f) {
  switch (f) {
    case Finiteness::finite: return "finite";
    case Finiteness::infinite: return "infinite";
    case Finiteness::unknown: break;
  }
  return "unknown";
}

std::vector<double> Activation::kink_locations() const {
  std::vector<double> out;
  out.reserve(kinks.size());
  for (const Kink& k : kinks) out.push_back(k.location);
  std::sort(out.begin(), out.end());
  return out;
}

bool Activation::has_finite_slopes() const noexcept {
  return alpha_plus && alpha_minus && std::isfinite(*alpha_plus) && std::isfinite(*alpha_minus);
}

void AffineParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) {
    throw ArgumentError("AffineParams: all parameters must be finite");
  }
  if (a == 0.0) throw ArgumentError("AffineParams: a must be nonzero");
  if (c == 0.0) throw ArgumentError("AffineParams: c must be nonzero");
}

Activation leaky_relu(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ArgumentError("leaky_relu: slope must lie in (0, 1), got " + std::to_string(alpha));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "leaky_relu(%.9g)", alpha);
  Activation a;
  a.name = buf;
  a.value = [alpha](double x) { return x >= 0.0 ? x : alpha * x; };
  a.deriv = [alpha](double x) { return x >= 0.0 ? 1.0 : alpha; };
  a.second_deriv = [](double) { return 0.0; };
  a.kinks = {{0.0, 1.0 - alpha}};
  a.alpha_plus = 1.0;
  a.alpha_minus = alpha;
  a.tv_analytic = 1.0 - alpha;
  a.c_phi = Finiteness::finite;
  a.sup_slope = 1.0;
  return a;
}

Activation poly(int k) {
  if (k < 1) throw ArgumentError("poly: degree must be at least 1, got " + std::to_string(k));
  if (k == 1) {
    Activation a = make_identity();
    a.name = "poly(1)";
    return a;
  }
  Activation a;
  a.name = "poly(" + std::to_string(k) + ")";
  a.value = [k](double x) { return std::pow(x, k); };
  a.deriv = [k](double x) { return k * std::pow(x, k - 1); };
  a.second_deriv = [k](double x) { return k * (k - 1) * std::pow(x, k - 2); };
  a.alpha_plus = kInf;
  a.alpha_minus = kInf;
  a.tv_analytic = kInf;
  a.c_phi = Finiteness::infinite;
  return a;
}

Activation builtin(std::string_view name) {
  if (name == "relu") return make_relu();
  if (name == "leaky_relu") return leaky_relu(0.01);
  if (name == "tanh") return make_tanh();
  if (name == "sigmoid") return make_sigmoid();
  if (name == "swish") return make_swish();
  if (name == "gelu") return make_gelu();
  if (name == "mish") return make_mish();
  if (name == "telu") return make_telu();
  if (name == "identity") return make_identity();
  if (auto arg = parenthesized(name, "leaky_relu")) return leaky_relu(parse_number(*arg, "leaky_relu"));
  if (auto arg = parenthesized(name, "poly")) {
    const double k = parse_number(*arg, "poly");
    if (k != std::floor(k) || k > 64) throw RegistryError("builtin: poly degree must be a small integer");
    return poly(static_cast<int>(k));
  }
  throw RegistryError("unknown activation '" + std::string(name) + "'");
}

std::vector<std::string> classified_names() {
  return {"relu", "leaky_relu", "tanh", "sigmoid", "swish", "gelu", "mish", "telu"};
}

Activation affine_wrap(const Activation& base, const AffineParams& p) {
  p.validate();
  const auto [a, b, c, d] = p;
  Activation out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.9g*%s(%.9g*x%+.9g)%+.9g", c, base.name.c_str(), a, b, d);
  out.name = buf;
  const RealFn phi = base.value;
  const RealFn dphi = base.deriv;
  out.value = [=](double x) { return c * phi(a * x + b) + d; };
  out.deriv = [=](double x) {
    // the right limit of phi~' at x is the right (a > 0) or left (a < 0) limit of phi'
    const double u = a * x + b;
    return c * a * (a > 0.0 ? dphi(u) : dphi(std::nextafter(u, -kInf)));
  };
  if (base.second_deriv) {
    const RealFn d2 = *base.second_deriv;
    out.second_deriv = [=](double x) { return c * a * a * d2(a * x + b); };
  }
  for (const Kink& k : base.kinks) {
    out.kinks.push_back({(k.location - b) / a, c * std::abs(a) * k.slope_jump});
  }
  std::sort(out.kinks.begin(), out.kinks.end(),
            [](const Kink& l, const Kink& r) { return l.location < r.location; });

  auto scaled = [&](const std::optional<double>& alpha) -> std::optional<double> {
    if (!alpha) return std::nullopt;
    const double v = c * a * *alpha;
    return v == 0.0 ? 0.0 : v;  // normalize -0
  };
  out.alpha_plus = a > 0.0 ? scaled(base.alpha_plus) : scaled(base.alpha_minus);
  out.alpha_minus = a > 0.0 ? scaled(base.alpha_minus) : scaled(base.alpha_plus);
  if (base.tv_analytic) out.tv_analytic = std::abs(c * a) * *base.tv_analytic;
  if (base.sup_slope) out.sup_slope = std::abs(c * a) * *base.sup_slope;

  // A constant offset d, or an input shift b that moves a nonzero linear
  // asymptote, leaves a nonvanishing residual c*alpha*b + d in the tails.
  const bool shifted_tail = base.has_finite_slopes() &&
                            (c * *base.alpha_plus * b != 0.0 || c * *base.alpha_minus * b != 0.0);
  if (d != 0.0 || shifted_tail) {
    out.c_phi = Finiteness::infinite;
  } else {
    out.c_phi = base.c_phi;
  }
  return out;
}

std::string Classification::label() const {
  std::string head = cls == TaxonomyClass::A0 ? "A0" : cls == TaxonomyClass::A1 ? "A1" : "A_gt1";
  return head + " (" + growth + (sub_label.empty() ? "" : ", " + sub_label) + ")";
}

Classification classify(const Activation& act) {
  if (!act.alpha_plus || !act.alpha_minus) {
    throw MetadataError("classify: asymptotic slopes of '" + act.name + "' are not set");
  }
  const double ap = *act.alpha_plus;
  const double am = *act.alpha_minus;
  if (!std::isfinite(ap) || !std::isfinite(am)) return {TaxonomyClass::A_gt1, "superlinear growth", ""};
  if (ap == 0.0 && am == 0.0) return {TaxonomyClass::A0, "bounded", "saturating"};
  return {TaxonomyClass::A1, "linear-growth", act.smooth() ? "smooth" : "asymmetric"};
}

}  // namespace actsig

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "actsig/quadrature.hpp"

namespace actsig {

/// Three-valued verdict for finiteness of the compensated-primitive sup norm.
enum class Finiteness { finite, infinite, unknown };

std::string_view to_string(Finiteness f);

/// A point where the slope jumps: deriv(loc+) - deriv(loc-) == slope_jump.
struct Kink {
  double location;
  double slope_jump;
};

/// A scalar nonlinearity together with its evaluators and tail metadata.
///
/// `deriv` is an a.e. representative of the slope; at a kink it returns the
/// right limit. Slopes alpha_plus / alpha_minus are the limits of phi(x)/x at
/// +/- infinity and may be +/-infinity; they are empty when unknown.
struct Activation {
  std::string name;
  RealFn value;
  RealFn deriv;
  std::optional<RealFn> second_deriv;
  std::vector<Kink> kinks;
  std::optional<double> alpha_plus;
  std::optional<double> alpha_minus;
  std::optional<double> tv_analytic;
  Finiteness c_phi = Finiteness::unknown;
  std::optional<double> sup_slope;

  /// Kink locations, in increasing order.
  std::vector<double> kink_locations() const;
  bool smooth() const noexcept { return kinks.empty(); }
  bool has_finite_slopes() const noexcept;
};

/// phi~(x) = c * phi(a x + b) + d.
struct AffineParams {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;
  double d = 0.0;

  /// Throws ArgumentError unless a != 0 and c != 0 (and all are finite).
  void validate() const;
};

/// Registry lookup. Accepted identifiers: relu, leaky_relu (slope 0.01),
/// leaky_relu(alpha), tanh, sigmoid, swish, gelu, mish, telu, identity,
/// poly(k). Throws RegistryError for unknown names and ArgumentError for a
/// leaky slope outside (0, 1) or a polynomial degree below 1.
Activation builtin(std::string_view name);

Activation leaky_relu(double alpha);
Activation poly(int k);

/// The eight classified activations, in a fixed order.
std::vector<std::string> classified_names();

/// Wraps an activation in an affine reparameterization, transporting its
/// kinks, slopes, slope variation and tail flag.
Activation affine_wrap(const Activation& base, const AffineParams& p);

enum class TaxonomyClass { A0, A1, A_gt1 };

struct Classification {
  TaxonomyClass cls;
  std::string growth;     ///< "bounded", "linear-growth" or "superlinear growth"
  std::string sub_label;  ///< "saturating", "asymmetric", "smooth" or empty
  std::string label() const;  ///< e.g. "A0 (bounded, saturating)"
};

/// Places an activation in the slope taxonomy. Throws MetadataError when
/// either asymptotic slope is unset.
Classification classify(const Activation& act);

}  // namespace actsig

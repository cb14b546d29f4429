#pragma once

#include <functional>
#include <span>
#include <vector>

namespace actsig {

using RealFn = std::function<double(double)>;

inline constexpr int kDefaultOrder = 160;
inline constexpr int kMaxOrder = 1024;

/// Gauss-Hermite rule for the physicists' weight e^{-x^2}.
///
/// Nodes are strictly increasing and exactly mirrored about zero. Weights of
/// the outermost nodes underflow to zero for orders above roughly 350; every
/// weight that is representable in double precision is positive.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// N(mean, std^2). Construction rejects std <= 0.
class GaussianLaw {
 public:
  GaussianLaw(double mean, double std);
  static GaussianLaw centered(double std) { return {0.0, std}; }

  double mean() const noexcept { return mean_; }
  double std() const noexcept { return std_; }

 private:
  double mean_;
  double std_;
};

/// Builds the order-n rule by Newton refinement of Tricomi initial guesses on
/// the normalized three-term recurrence. Throws ArgumentError outside [1, 1024].
QuadratureRule build_rule(int order);

/// E[f(X)], X ~ law, as (1/sqrt(pi)) sum w_i f(mean + sqrt(2) std x_i).
/// Symmetric node pairs are summed together, so odd f with mean 0 gives 0.
/// Throws EvaluationError naming the node if f is non-finite there.
double gauss_expect(const QuadratureRule& rule, const GaussianLaw& law, const RealFn& f);

/// Same expectation for an integrand that is only piecewise smooth, with slope
/// or value jumps at `breakpoints` (in x, not standardized). With no breakpoints
/// this is gauss_expect; otherwise the standardized density is integrated piece
/// by piece with adaptive Gauss-Kronrod so kinks do not degrade accuracy.
double gauss_expect(const QuadratureRule& rule, const GaussianLaw& law, const RealFn& f,
                    std::span<const double> breakpoints);

/// Adaptive G7/K15 integration of f over [a, b] to absolute tolerance.
/// Bisects panels whose Gauss and Kronrod estimates disagree by more than
/// their share of the tolerance.
double integrate_interval(const RealFn& f, double a, double b, double abs_tol);

enum class Direction { positive, negative };

/// Integral of f over [origin, +inf) or (-inf, origin]. The window doubles
/// from 8 until the newest panel contributes less than abs_tol/10; throws
/// ConvergenceError if the half-width passes 200.
double integrate_ray(const RealFn& f, double origin, Direction dir, double abs_tol);

/// Integral of f over the real line: the two rays from 0, with any
/// breakpoints inside the central window honoured as panel edges.
double integrate_line(const RealFn& f, double abs_tol, std::span<const double> breakpoints = {});

/// Expansion cap shared by the ray integrators and tail profiles.
inline constexpr double kExpansionCap = 200.0;

}  // namespace actsig

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "actsig/activation.hpp"

namespace actsig {

/// Samples are processed in fixed chunks; chunk statistics are merged in a
/// fixed pairwise tree, so results do not depend on the number of threads.
inline constexpr std::uint64_t kChunkSize = 8192;

/// Count, mean and sum of squared deviations of a sample.
struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  /// Chan et al. pairwise combination.
  static RunningStats merge(const RunningStats& a, const RunningStats& b);
  double sample_variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const;
};

/// A sampled estimate with its standard error.
struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

EstimateWithError to_estimate(const RunningStats& s, std::uint64_t seed);

/// Evaluates `width` statistics per sample: sample(i, out) writes out[0..width)
/// for the i-th sample. Returns one RunningStats per output.
using SampleFn = std::function<void(std::uint64_t index, double* out)>;

std::vector<RunningStats> chunked_stats(std::uint64_t samples, int width, const SampleFn& sample);
std::vector<RunningStats> chunked_stats_serial(std::uint64_t samples, int width, const SampleFn& sample);

/// Monte-Carlo estimates of (m1, g1, g2, m2, eta) under Z ~ N(0, sigma^2).
/// g2 = sqrt(mean phi'^2) carries the delta-method error SE(mean)/(2 g2).
struct McComponents {
  EstimateWithError m1;
  EstimateWithError g1;
  EstimateWithError g2;
  EstimateWithError m2;
  EstimateWithError eta;
};

/// Requires samples >= 1000 and sigma > 0 (ArgumentError otherwise).
McComponents mc_components(const Activation& act, double sigma, std::uint64_t samples, std::uint64_t seed);
McComponents mc_components_serial(const Activation& act, double sigma, std::uint64_t samples, std::uint64_t seed);

}  // namespace actsig

#include "actsig/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "actsig/errors.hpp"
#include "actsig/rng.hpp"

namespace actsig {

namespace {

std::vector<RunningStats> chunk_stats(std::uint64_t begin, std::uint64_t end, int width, const SampleFn& sample) {
  const std::size_t n = end - begin;
  std::vector<double> buf(n * width);
  for (std::uint64_t i = begin; i < end; ++i) sample(i, &buf[(i - begin) * width]);
  std::vector<RunningStats> out(width);
  for (int k = 0; k < width; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += buf[i * width + k];
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = buf[i * width + k] - mean;
      ss += dev * dev;
    }
    out[k] = {n, mean, ss};
  }
  return out;
}

std::vector<RunningStats> tree_merge(std::vector<std::vector<RunningStats>> level) {
  while (level.size() > 1) {
    std::vector<std::vector<RunningStats>> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      std::vector<RunningStats> merged(level[i].size());
      for (std::size_t k = 0; k < merged.size(); ++k) merged[k] = RunningStats::merge(level[i][k], level[i + 1][k]);
      next.push_back(std::move(merged));
    }
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return level.front();
}

std::vector<RunningStats> run_chunks(std::uint64_t samples, int width, const SampleFn& sample, bool parallel) {
  if (samples == 0 || width <= 0) throw ArgumentError("chunked_stats: need at least one sample and one output");
  const std::int64_t chunks = static_cast<std::int64_t>((samples + kChunkSize - 1) / kChunkSize);
  std::vector<std::vector<RunningStats>> per_chunk(chunks);
  auto work = [&](std::int64_t c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunkSize;
    per_chunk[c] = chunk_stats(begin, std::min(samples, begin + kChunkSize), width, sample);
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) work(c);
  } else {
    for (std::int64_t c = 0; c < chunks; ++c) work(c);
  }
  return tree_merge(std::move(per_chunk));
}

McComponents components_impl(const Activation& act, double sigma, std::uint64_t samples, std::uint64_t seed,
                             bool parallel) {
  if (samples < 1000) throw ArgumentError("mc_components: at least 1000 samples are required");
  if (!(sigma > 0.0)) throw ArgumentError("mc_components: sigma must be positive");
  const CounterRng rng(seed, 0);
  const RealFn& phi = act.value;
  const RealFn& dphi = act.deriv;
  // sample i uses half of counter block i/2
  SampleFn sample = [&](std::uint64_t i, double* out) {
    const double z = sigma * rng.normals(i / 2)[i % 2];
    const double v = phi(z);
    const double dv = dphi(z);
    out[0] = v;
    out[1] = dv;
    out[2] = dv * dv;
    out[3] = v * v;
    out[4] = z * v;
  };
  const std::vector<RunningStats> s = run_chunks(samples, 5, sample, parallel);
  McComponents r;
  r.m1 = to_estimate(s[0], seed);
  r.g1 = to_estimate(s[1], seed);
  const EstimateWithError sq = to_estimate(s[2], seed);
  r.g2 = sq;
  r.g2.value = std::sqrt(sq.value);
  r.g2.std_error = r.g2.value > 0.0 ? sq.std_error / (2.0 * r.g2.value) : 0.0;
  r.m2 = to_estimate(s[3], seed);
  r.eta = to_estimate(s[4], seed);
  return r;
}

}  // namespace

RunningStats RunningStats::merge(const RunningStats& a, const RunningStats& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  const std::uint64_t n = a.n + b.n;
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double delta = b.mean - a.mean;
  return {n, a.mean + delta * nb / static_cast<double>(n), a.m2 + b.m2 + delta * delta * na * nb / static_cast<double>(n)};
}

double RunningStats::std_error() const {
  return n > 1 ? std::sqrt(sample_variance()) / std::sqrt(static_cast<double>(n)) : 0.0;
}

EstimateWithError to_estimate(const RunningStats& s, std::uint64_t seed) {
  return {s.mean, s.std_error(), s.n, seed};
}

std::vector<RunningStats> chunked_stats(std::uint64_t samples, int width, const SampleFn& sample) {
  return run_chunks(samples, width, sample, true);
}

std::vector<RunningStats> chunked_stats_serial(std::uint64_t samples, int width, const SampleFn& sample) {
  return run_chunks(samples, width, sample, false);
}

McComponents mc_components(const Activation& act, double sigma, std::uint64_t samples, std::uint64_t seed) {
  return components_impl(act, sigma, samples, seed, true);
}

McComponents mc_components_serial(const Activation& act, double sigma, std::uint64_t samples, std::uint64_t seed) {
  return components_impl(act, sigma, samples, seed, false);
}

}  // namespace actsig

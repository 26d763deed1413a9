#include "vibrodiag/time_features.hpp"

#include <algorithm>
#include <cmath>

namespace vibrodiag::features {

double mean(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return acc / static_cast<double>(x.size() - 1);
}

double rms(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size() - 1));
}

TimeFeatures extract_time_features(const Signal& segment,
                                   const TimeFeatureOptions& opts) {
  validate(segment);
  const auto& x = segment.samples;
  const std::size_t K = x.size();
  if (K < 4) throw DataError("time features: segment shorter than 4 samples");

  TimeFeatures f;
  f.average = mean(x);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0, sq = 0.0;
  double lo = x[0], hi = x[0], hi_abs = std::abs(x[0]);
  for (double v : x) {
    const double d = v - f.average;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
    sq += v * v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    hi_abs = std::max(hi_abs, std::abs(v));
  }
  const double norm = 1.0 / static_cast<double>(K - 1);
  f.variance = m2 * norm;
  f.rms = std::sqrt(sq * norm);
  f.amplitude_range = hi - lo;

  if (f.variance <= 0.0)
    throw DataError(
        "time features: constant segment, kurtosis/skewness undefined");

  f.kurtosis = (m4 * norm) / (f.variance * f.variance);
  f.skewness = (m3 * norm) / std::pow(f.variance, 1.5);

  const double peak = opts.absolute_peak ? hi_abs : hi;
  f.peak_to_rms = peak / f.rms;
  return f;
}

}  // namespace vibrodiag::features

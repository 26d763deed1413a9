#ifndef VIBRODIAG_TIME_FEATURES_HPP
#define VIBRODIAG_TIME_FEATURES_HPP

#include <span>

#include "vibrodiag/types.hpp"

namespace vibrodiag::features {

/// The seven per-segment time-domain statistics (feature set "TD").
struct TimeFeatures {
  double average = 0.0;
  double variance = 0.0;         // 1/(K-1) about the mean
  double rms = 0.0;              // sqrt(1/(K-1) sum x^2)
  double kurtosis = 0.0;         // 1/(K-1) fourth central moment / variance^2
  double skewness = 0.0;
  double amplitude_range = 0.0;  // max - min
  double peak_to_rms = 0.0;      // max / rms (raw max by default)
};

struct TimeFeatureOptions {
  /// Use max(|x|) instead of max(x) for the peak-based features.
  bool absolute_peak = false;
};

double mean(std::span<const double> x);
double sample_variance(std::span<const double> x);  // 1/(K-1), mean removed
double rms(std::span<const double> x);              // 1/(K-1) normalization

/// Throws DataError for segments shorter than 4 samples and for constant
/// segments (zero variance makes kurtosis/skewness undefined).
TimeFeatures extract_time_features(const Signal& segment,
                                   const TimeFeatureOptions& opts = {});

}  // namespace vibrodiag::features

#endif

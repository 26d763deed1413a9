#ifndef VIBRODIAG_SPECTRAL_FEATURES_HPP
#define VIBRODIAG_SPECTRAL_FEATURES_HPP

#include <span>

#include "vibrodiag/types.hpp"

namespace vibrodiag::features {

/// The six per-segment spectral descriptors (feature set "SD").
struct SpectralFeatures {
  double centroid_hz = 0.0;
  double spread_hz = 0.0;
  double kurtosis = 0.0;  // 0 when the spread degenerates to zero
  double entropy = 0.0;
  double crest = 0.0;
  double rolloff_hz = 0.0;
};

struct SpectralOptions {
  double kappa = 0.95;  // roll-off fraction
  /// The entropy sum runs over magnitudes normalized to sum 1; switch off
  /// for the literal (scale-dependent) form.
  bool normalized_entropy = true;
};

/// Descriptors of a one-sided magnitude spectrum. bin_freqs_hz must be
/// strictly increasing and match magnitudes in length; all magnitudes
/// non-negative, not all zero.
SpectralFeatures extract_spectral_features(std::span<const double> magnitudes,
                                           std::span<const double> bin_freqs_hz,
                                           const SpectralOptions& opts = {});

/// Convenience wrapper: hann-windowed full-segment spectrum (zero-padded to
/// the next power of two), one-sided bins.
SpectralFeatures extract_spectral_features(const Signal& segment,
                                           const SpectralOptions& opts = {});

}  // namespace vibrodiag::features

#endif

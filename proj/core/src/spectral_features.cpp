#include "vibrodiag/spectral_features.hpp"

#include <algorithm>
#include <cmath>

#include "vibrodiag/dsp.hpp"

namespace vibrodiag::features {

SpectralFeatures extract_spectral_features(std::span<const double> magnitudes,
                                           std::span<const double> bin_freqs_hz,
                                           const SpectralOptions& opts) {
  const std::size_t n = magnitudes.size();
  if (n == 0 || bin_freqs_hz.size() != n)
    throw DataError("spectral features: bin/magnitude size mismatch");
  if (!(opts.kappa > 0.0 && opts.kappa < 1.0))
    throw DataError("spectral features: kappa must lie in (0,1)");

  double total = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (magnitudes[i] < 0.0)
      throw DataError("spectral features: negative magnitude");
    if (i > 0 && !(bin_freqs_hz[i] > bin_freqs_hz[i - 1]))
      throw DataError("spectral features: bin frequencies not increasing");
    total += magnitudes[i];
    peak = std::max(peak, magnitudes[i]);
  }
  if (total <= 0.0) throw DataError("spectral features: all-zero spectrum");

  SpectralFeatures f;
  double wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) wsum += bin_freqs_hz[i] * magnitudes[i];
  f.centroid_hz = wsum / total;

  double m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = bin_freqs_hz[i] - f.centroid_hz;
    m2 += d * d * magnitudes[i];
    m4 += d * d * d * d * magnitudes[i];
  }
  f.spread_hz = std::sqrt(m2 / total);
  const double spr4 = f.spread_hz * f.spread_hz * f.spread_hz * f.spread_hz;
  f.kurtosis = spr4 > 0.0 ? m4 / (spr4 * total) : 0.0;

  const double log_denom = std::log(static_cast<double>(n - 1));
  double ent = 0.0;
  if (opts.normalized_entropy) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = magnitudes[i] / total;
      if (p > 0.0) ent -= p * std::log(p);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      if (magnitudes[i] > 0.0) ent -= magnitudes[i] * std::log(magnitudes[i]);
  }
  f.entropy = ent / log_denom;

  f.crest = peak / (total / static_cast<double>(n));

  const double threshold = opts.kappa * total;
  double cum = 0.0;
  f.rolloff_hz = bin_freqs_hz[n - 1];
  for (std::size_t i = 0; i < n; ++i) {
    cum += magnitudes[i];
    if (cum >= threshold) {
      f.rolloff_hz = bin_freqs_hz[i];
      break;
    }
  }
  return f;
}

SpectralFeatures extract_spectral_features(const Signal& segment,
                                           const SpectralOptions& opts) {
  validate(segment);
  const std::size_t n = segment.samples.size();
  dsp::WindowSpec win{dsp::WindowKind::hann, n};
  const std::vector<double> w = dsp::window_samples(win);
  std::vector<double> windowed(n);
  for (std::size_t k = 0; k < n; ++k) windowed[k] = segment.samples[k] * w[k];

  const std::size_t m = dsp::next_pow2(n);
  const dsp::Spectrum spec = dsp::dft(windowed, m, segment.sample_rate_hz);
  const std::vector<double> mags = dsp::one_sided_magnitudes(spec);
  std::vector<double> freqs(mags.size());
  for (std::size_t i = 0; i < mags.size(); ++i)
    freqs[i] = static_cast<double>(i) * spec.bin_spacing_hz;
  return extract_spectral_features(mags, freqs, opts);
}

}  // namespace vibrodiag::features

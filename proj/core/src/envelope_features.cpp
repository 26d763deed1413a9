#include "vibrodiag/envelope_features.hpp"

#include <algorithm>
#include <cmath>

#include "vibrodiag/dsp.hpp"
#include "vibrodiag/time_features.hpp"

namespace vibrodiag::features {

FaultFrequencies fault_frequencies(const BearingGeometry& g,
                                   double rotational_freq_hz) {
  if (!(rotational_freq_hz > 0.0))
    throw DataError("fault frequencies: rotational frequency must be > 0");
  if (g.n_rolling_elements < 2 || !(g.ball_diameter_mm > 0.0) ||
      !(g.ball_diameter_mm < g.pitch_diameter_mm))
    throw DataError("fault frequencies: non-physical bearing geometry");

  const double ratio = g.ball_diameter_mm / g.pitch_diameter_mm *
                       std::cos(g.contact_angle_rad);
  const double n = static_cast<double>(g.n_rolling_elements);
  const double fr = rotational_freq_hz;

  FaultFrequencies f;
  f.bpfo_hz = 0.5 * n * fr * (1.0 - ratio);
  f.bpfi_hz = 0.5 * n * fr * (1.0 + ratio);
  f.ca_hz = 0.5 * fr * (1.0 - ratio);
  f.re_hz = (g.pitch_diameter_mm / (2.0 * g.ball_diameter_mm)) * fr *
            (1.0 - ratio * ratio);
  return f;
}

EnvelopeSpectrum envelope_spectrum(const Signal& segment) {
  std::vector<double> env = dsp::analytic_envelope(segment);
  const double m = mean(env);
  for (double& v : env) v -= m;

  const std::size_t padded = dsp::next_pow2(env.size());
  const dsp::Spectrum spec = dsp::dft(env, padded, segment.sample_rate_hz);

  EnvelopeSpectrum out;
  out.magnitudes = dsp::one_sided_magnitudes(spec);
  out.bin_spacing_hz = spec.bin_spacing_hz;
  return out;
}

std::size_t nearest_bin(double freq_hz, double bin_spacing_hz) {
  // ties go to the lower bin
  const double idx = std::ceil(freq_hz / bin_spacing_hz - 0.5);
  return idx < 0.0 ? 0 : static_cast<std::size_t>(idx);
}

namespace {

double harmonic_sum(const EnvelopeSpectrum& spec, double fault_hz,
                    bool slip_search) {
  double acc = 0.0;
  for (int i = 1; i <= 3; ++i) {
    const double f = static_cast<double>(i) * fault_hz;
    const std::size_t bin = nearest_bin(f, spec.bin_spacing_hz);
    if (bin >= spec.magnitudes.size())
      throw DataError("envelope amplitudes: fault harmonic beyond Nyquist");
    if (slip_search) {
      const std::size_t lo = bin >= 2 ? bin - 2 : 0;
      const std::size_t hi =
          std::min(bin + 2, spec.magnitudes.size() - 1);
      double best = 0.0;
      for (std::size_t b = lo; b <= hi; ++b)
        best = std::max(best, spec.magnitudes[b]);
      acc += best;
    } else {
      acc += spec.magnitudes[bin];
    }
  }
  return acc;
}

}  // namespace

EnvAmpFeatures envelope_fault_amplitudes(const Signal& segment,
                                         const FaultFrequencies& faults,
                                         const EnvAmpOptions& opts) {
  const EnvelopeSpectrum spec = envelope_spectrum(segment);
  EnvAmpFeatures out;
  out.amp_bpfo = harmonic_sum(spec, faults.bpfo_hz, opts.slip_search);
  out.amp_bpfi = harmonic_sum(spec, faults.bpfi_hz, opts.slip_search);
  out.amp_ca = harmonic_sum(spec, faults.ca_hz, opts.slip_search);
  out.amp_re = harmonic_sum(spec, faults.re_hz, opts.slip_search);
  return out;
}

}  // namespace vibrodiag::features

#ifndef VIBRODIAG_DSP_HPP
#define VIBRODIAG_DSP_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "vibrodiag/types.hpp"

namespace vibrodiag::dsp {

using cdouble = std::complex<double>;

enum class WindowKind { hann, hamming, rectangular };

struct WindowSpec {
  WindowKind kind = WindowKind::hann;
  std::size_t length = 0;
};

/// Window samples, periodic convention. Tapered kinds need length >= 2.
std::vector<double> window_samples(const WindowSpec& spec);

/// Complex spectrum of one DFT of length dft_length.
struct Spectrum {
  std::vector<cdouble> bins;       // dft_length entries
  std::size_t dft_length = 0;
  double bin_spacing_hz = 0.0;     // sample_rate / dft_length when known
};

/// STFT coefficients, full dft_length bins per frame.
struct StftGrid {
  Mat<cdouble> values;             // rows = frequency bins, cols = frames
  std::size_t window_len = 0;
  std::size_t hop = 0;
  std::size_t dft_length = 0;
  double frame_rate_hz = 0.0;      // sample_rate / hop
  double bin_spacing_hz = 0.0;

  std::size_t n_frames() const { return values.cols; }
  std::size_t n_bins() const { return values.rows; }
};

/// In-place FFT of arbitrary length (radix-2 for powers of two, Bluestein
/// otherwise). inverse=true applies the 1/N factor.
void fft(std::vector<cdouble>& data, bool inverse);

/// DFT of a real segment, zero-padded to dft_length when shorter.
/// bins[mu] = sum_k x[k] exp(-j 2 pi k mu / M).
Spectrum dft(std::span<const double> segment, std::size_t dft_length,
             double sample_rate_hz = 0.0);

/// Frames cover [n*hop, n*hop + window.length); trailing partial frames are
/// dropped. Each frame equals dft() of the windowed frame samples.
StftGrid stft(const Signal& signal, const WindowSpec& window, std::size_t hop,
              std::size_t dft_length);

/// |x + j H{x}| via the frequency-domain analytic-signal construction
/// (exact length, no padding). Requires at least 4 samples.
std::vector<double> analytic_envelope(const Signal& signal);

/// out[mu-1] = sum_{i=1..K} in[i-1] cos(pi (2i-1) mu / (2K)), mu = 1..K.
/// Note the indexing: the zero-frequency coefficient is not part of the
/// output, and the last coefficient is identically zero.
std::vector<double> dct_ii(std::span<const double> values);

/// One-sided magnitudes (bins 0..M/2) of a spectrum of real input.
std::vector<double> one_sided_magnitudes(const Spectrum& spectrum);

std::size_t next_pow2(std::size_t n);

}  // namespace vibrodiag::dsp

#endif

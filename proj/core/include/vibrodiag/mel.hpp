#ifndef VIBRODIAG_MEL_HPP
#define VIBRODIAG_MEL_HPP

#include <cstddef>
#include <vector>

#include "vibrodiag/dsp.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag::features {

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular mel filterbank over the one-sided DFT bins. Triangles are
/// linear in mel, equally spaced, unit peak; bands cover [0, fs/2].
struct MelFilterbank {
  Mat<double> weights;               // n_filters x (dft_length/2 + 1)
  std::vector<double> band_edges_hz; // n_filters + 2 edge points
  std::size_t dft_length = 0;
  double sample_rate_hz = 0.0;

  std::size_t n_filters() const { return weights.rows; }
  /// Sum of a filter's bin weights (its discrete area).
  double filter_area(std::size_t i) const;
};

MelFilterbank mel_filterbank(std::size_t n_filters, std::size_t dft_length,
                             double sample_rate_hz);

struct MfccConfig {
  dsp::WindowSpec frame{dsp::WindowKind::hann, 1280};  // 25 ms at 51.2 kHz
  std::size_t hop = 205;                               // 4 ms
  std::size_t n_kept = 13;
  double log_floor = 1e-12;
  /// Divide each band energy by the filter's discrete area, so a flat power
  /// spectrum yields equal band energies. The literal unnormalized triangle
  /// sum is selectable for strict fidelity.
  bool area_normalized = true;
  enum class Aggregation { mean, median } aggregation = Aggregation::mean;
};

struct MfccVector {
  std::vector<double> coefficients;  // c[1..n_kept]
};

/// Per-frame log mel band energies -> DCT -> aggregate over frames.
MfccVector mfcc(const Signal& segment, const MelFilterbank& bank,
                const MfccConfig& cfg);

}  // namespace vibrodiag::features

#endif

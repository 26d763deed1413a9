#ifndef VIBRODIAG_AMS_HPP
#define VIBRODIAG_AMS_HPP

#include <cstddef>
#include <vector>

#include "vibrodiag/dsp.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag::features {

/// Framing parameters for one of the two cascaded STFTs.
struct StftConfig {
  dsp::WindowSpec window;
  std::size_t hop = 0;
  std::size_t dft_length = 0;
};

/// Log-compressed amplitude modulation spectrogram: rows are first-STFT
/// subbands (center frequency), columns modulation-frequency bins.
struct AmsMatrix {
  Mat<double> values;                 // natural log of averaged magnitudes
  std::vector<double> center_freqs_hz;
  std::vector<double> mod_freqs_hz;
};

struct AmsOptions {
  double log_floor = 1e-12;
  enum class Aggregation { mean, median } aggregation = Aggregation::mean;
};

/// Defaults per the 51.2 kHz parameter set: 25 ms / 4 ms framing with the
/// first DFT at 2048 (next power of two above the window; a strict variant
/// truncates frames to 512 samples), then 128-frame / 64-frame framing with
/// a 256-point second DFT.
StftConfig default_first_stft(double sample_rate_hz, bool strict_short_nfft);
StftConfig default_second_stft();

/// First STFT -> squared magnitude per subband -> per-subband second STFT
/// over frames -> magnitude -> average across second-STFT frames -> log.
AmsMatrix ams(const Signal& segment, const StftConfig& first,
              const StftConfig& second, const AmsOptions& opts = {});

/// Sum of AMS values over cells with center frequency above min_center_hz
/// and modulation frequency strictly between zero and max_mod_hz.
double ams_scalar(const AmsMatrix& matrix, double min_center_hz = 20000.0,
                  double max_mod_hz = 80.0);

/// Writes the matrix as CSV (header row of modulation frequencies, one row
/// per subband) for plotting.
void write_ams_csv(const AmsMatrix& matrix, const std::string& path);

}  // namespace vibrodiag::features

#endif

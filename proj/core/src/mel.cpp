#include "vibrodiag/mel.hpp"

#include <algorithm>
#include <cmath>

namespace vibrodiag::features {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

double MelFilterbank::filter_area(std::size_t i) const {
  double acc = 0.0;
  for (std::size_t nu = 0; nu < weights.cols; ++nu) acc += weights.at(i, nu);
  return acc;
}

MelFilterbank mel_filterbank(std::size_t n_filters, std::size_t dft_length,
                             double sample_rate_hz) {
  if (n_filters < 2 || n_filters > dft_length / 2)
    throw DataError("mel filterbank: infeasible filter count");
  if (!(sample_rate_hz > 0.0))
    throw DataError("mel filterbank: sample rate must be positive");

  const std::size_t n_bins = dft_length / 2 + 1;
  const double mel_max = hz_to_mel(sample_rate_hz / 2.0);

  std::vector<double> edges_mel(n_filters + 2);
  for (std::size_t i = 0; i < edges_mel.size(); ++i)
    edges_mel[i] = mel_max * static_cast<double>(i) /
                   static_cast<double>(n_filters + 1);

  MelFilterbank bank;
  bank.dft_length = dft_length;
  bank.sample_rate_hz = sample_rate_hz;
  bank.band_edges_hz.resize(edges_mel.size());
  for (std::size_t i = 0; i < edges_mel.size(); ++i)
    bank.band_edges_hz[i] = mel_to_hz(edges_mel[i]);

  bank.weights = Mat<double>(n_filters, n_bins);
  for (std::size_t nu = 0; nu < n_bins; ++nu) {
    const double f = static_cast<double>(nu) * sample_rate_hz /
                     static_cast<double>(dft_length);
    const double m = hz_to_mel(f);
    for (std::size_t i = 0; i < n_filters; ++i) {
      const double lo = edges_mel[i];
      const double c = edges_mel[i + 1];
      const double hi = edges_mel[i + 2];
      double w = 0.0;
      if (m > lo && m < hi)
        w = m <= c ? (m - lo) / (c - lo) : (hi - m) / (hi - c);
      bank.weights.at(i, nu) = std::max(w, 0.0);
    }
  }
  return bank;
}

MfccVector mfcc(const Signal& segment, const MelFilterbank& bank,
                const MfccConfig& cfg) {
  validate(segment);
  if (cfg.n_kept > bank.n_filters())
    throw DataError("mfcc: n_kept exceeds the filter count");
  if (std::abs(segment.sample_rate_hz - bank.sample_rate_hz) > 1e-9)
    throw DataError("mfcc: filterbank built for a different sample rate");

  const dsp::StftGrid grid =
      dsp::stft(segment, cfg.frame, cfg.hop, bank.dft_length);
  const std::size_t n_frames = grid.n_frames();
  const std::size_t n_filt = bank.n_filters();
  const std::size_t n_bins = bank.weights.cols;

  std::vector<double> areas(n_filt, 1.0);
  if (cfg.area_normalized)
    for (std::size_t i = 0; i < n_filt; ++i) areas[i] = bank.filter_area(i);

  Mat<double> cepstra(n_frames, n_filt);
  std::vector<double> power(n_bins);
  std::vector<double> logs(n_filt);
  for (std::size_t n = 0; n < n_frames; ++n) {
    for (std::size_t nu = 0; nu < n_bins; ++nu)
      power[nu] = std::norm(grid.values.at(nu, n));
    for (std::size_t i = 0; i < n_filt; ++i) {
      double e = 0.0;
      const double* w = bank.weights.row(i);
      for (std::size_t nu = 0; nu < n_bins; ++nu) e += w[nu] * power[nu];
      e /= areas[i];
      logs[i] = std::log(std::max(e, cfg.log_floor));
    }
    const std::vector<double> c = dsp::dct_ii(logs);
    for (std::size_t i = 0; i < n_filt; ++i) cepstra.at(n, i) = c[i];
  }

  MfccVector out;
  out.coefficients.resize(cfg.n_kept);
  if (cfg.aggregation == MfccConfig::Aggregation::mean) {
    for (std::size_t i = 0; i < cfg.n_kept; ++i) {
      double acc = 0.0;
      for (std::size_t n = 0; n < n_frames; ++n) acc += cepstra.at(n, i);
      out.coefficients[i] = acc / static_cast<double>(n_frames);
    }
  } else {
    std::vector<double> col(n_frames);
    for (std::size_t i = 0; i < cfg.n_kept; ++i) {
      for (std::size_t n = 0; n < n_frames; ++n) col[n] = cepstra.at(n, i);
      std::sort(col.begin(), col.end());
      out.coefficients[i] = n_frames % 2 == 1
                                ? col[n_frames / 2]
                                : 0.5 * (col[n_frames / 2 - 1] +
                                         col[n_frames / 2]);
    }
  }
  return out;
}

}  // namespace vibrodiag::features

#include "vibrodiag/ams.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace vibrodiag::features {

StftConfig default_first_stft(double sample_rate_hz, bool strict_short_nfft) {
  StftConfig cfg;
  const std::size_t win =
      static_cast<std::size_t>(std::llround(0.025 * sample_rate_hz));
  cfg.hop = static_cast<std::size_t>(std::llround(0.004 * sample_rate_hz));
  if (strict_short_nfft) {
    cfg.window = {dsp::WindowKind::hann, std::min<std::size_t>(win, 512)};
    cfg.dft_length = 512;
  } else {
    cfg.window = {dsp::WindowKind::hann, win};
    cfg.dft_length = dsp::next_pow2(win);
  }
  return cfg;
}

StftConfig default_second_stft() {
  return {{dsp::WindowKind::hann, 128}, 64, 256};
}

AmsMatrix ams(const Signal& segment, const StftConfig& first,
              const StftConfig& second, const AmsOptions& opts) {
  validate(segment);
  const std::size_t min_samples =
      first.window.length + first.hop * (second.window.length - 1);
  if (segment.samples.size() < min_samples)
    throw DataError("ams: segment shorter than one second-STFT window span");

  const dsp::StftGrid grid =
      dsp::stft(segment, first.window, first.hop, first.dft_length);
  const std::size_t n_sub = first.dft_length / 2 + 1;
  const std::size_t n_frames = grid.n_frames();

  const std::size_t w2 = second.window.length;
  const std::size_t hop2 = second.hop;
  const std::size_t m2 = second.dft_length;
  const std::size_t n_frames2 = (n_frames - w2) / hop2 + 1;
  const std::size_t n_mod = m2 / 2 + 1;
  const std::vector<double> win2 = dsp::window_samples(second.window);

  AmsMatrix out;
  out.values = Mat<double>(n_sub, n_mod);
  out.center_freqs_hz.resize(n_sub);
  out.mod_freqs_hz.resize(n_mod);
  for (std::size_t s = 0; s < n_sub; ++s)
    out.center_freqs_hz[s] = static_cast<double>(s) * grid.bin_spacing_hz;
  for (std::size_t b = 0; b < n_mod; ++b)
    out.mod_freqs_hz[b] = static_cast<double>(b) * grid.frame_rate_hz /
                          static_cast<double>(m2);

  std::vector<double> env(n_frames);
  std::vector<dsp::cdouble> buf(m2);
  std::vector<double> acc(n_mod);
  std::vector<std::vector<double>> frame_mags;
  const bool median = opts.aggregation == AmsOptions::Aggregation::median;
  if (median) frame_mags.assign(n_mod, std::vector<double>(n_frames2));

  for (std::size_t s = 0; s < n_sub; ++s) {
    for (std::size_t n = 0; n < n_frames; ++n)
      env[n] = std::norm(grid.values.at(s, n));

    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t f2 = 0; f2 < n_frames2; ++f2) {
      std::fill(buf.begin(), buf.end(), dsp::cdouble(0.0, 0.0));
      for (std::size_t k = 0; k < w2; ++k)
        buf[k] = dsp::cdouble(env[f2 * hop2 + k] * win2[k], 0.0);
      dsp::fft(buf, false);
      for (std::size_t b = 0; b < n_mod; ++b) {
        const double mag = std::abs(buf[b]);
        if (median)
          frame_mags[b][f2] = mag;
        else
          acc[b] += mag;
      }
    }
    for (std::size_t b = 0; b < n_mod; ++b) {
      double avg;
      if (median) {
        auto& v = frame_mags[b];
        std::sort(v.begin(), v.end());
        avg = n_frames2 % 2 == 1 ? v[n_frames2 / 2]
                                 : 0.5 * (v[n_frames2 / 2 - 1] +
                                          v[n_frames2 / 2]);
      } else {
        avg = acc[b] / static_cast<double>(n_frames2);
      }
      out.values.at(s, b) = std::log(std::max(avg, opts.log_floor));
    }
  }
  return out;
}

double ams_scalar(const AmsMatrix& matrix, double min_center_hz,
                  double max_mod_hz) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t s = 0; s < matrix.values.rows; ++s) {
    if (!(matrix.center_freqs_hz[s] > min_center_hz)) continue;
    for (std::size_t b = 0; b < matrix.values.cols; ++b) {
      const double f = matrix.mod_freqs_hz[b];
      if (f > 0.0 && f < max_mod_hz) {
        acc += matrix.values.at(s, b);
        ++count;
      }
    }
  }
  if (count == 0) throw DataError("ams_scalar: empty selection region");
  return acc;
}

void write_ams_csv(const AmsMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("ams csv: cannot open " + path);
  out << "center_hz";
  for (double f : matrix.mod_freqs_hz) out << ',' << f;
  out << '\n';
  for (std::size_t s = 0; s < matrix.values.rows; ++s) {
    out << matrix.center_freqs_hz[s];
    for (std::size_t b = 0; b < matrix.values.cols; ++b)
      out << ',' << matrix.values.at(s, b);
    out << '\n';
  }
}

}  // namespace vibrodiag::features

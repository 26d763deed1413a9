#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vibrodiag/ams.hpp"
#include "vibrodiag/config.hpp"
#include "vibrodiag/rng.hpp"

using namespace vibrodiag;
using namespace vibrodiag::features;

namespace {

constexpr double kFs = 51200.0;

Signal tone(double freq, double mod_freq, double depth, std::size_t n) {
  Signal s;
  s.sample_rate_hz = kFs;
  s.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / kFs;
    const double am =
        1.0 + depth * std::cos(2.0 * std::numbers::pi * mod_freq * t);
    s.samples[k] = am * std::cos(2.0 * std::numbers::pi * freq * t);
  }
  return s;
}

// modulation bins inside the second window's DC main lobe carry window
// leakage, not modulation; resolvable content starts past it
std::size_t dc_lobe_bins(const StftConfig& second) {
  return 2 * second.dft_length / second.window.length;
}

}  // namespace

TEST_CASE("table parameters: frame rate, bin spacing, max modulation") {
  config::FeatureParams fp;
  const auto first = fp.first_stft(kFs);
  CHECK(first.window.length == 1280);
  CHECK(first.hop == 205);
  CHECK(first.dft_length == 2048);

  const Signal s = tone(21000.0, 0.0, 0.0, 102400);
  const auto m = ams(s, first, fp.second_stft());
  CHECK(m.values.rows == 1025);
  CHECK(m.values.cols == 129);
  CHECK(std::abs(m.mod_freqs_hz[1] - 0.977) < 0.01);
  CHECK(std::abs(m.mod_freqs_hz[128] - 125.0) < 0.5);
  CHECK(m.center_freqs_hz[840] == doctest::Approx(21000.0));
}

TEST_CASE("unmodulated tone: off-DC modulation at least 30 dB down") {
  config::FeatureParams fp;
  const Signal s = tone(21000.0, 0.0, 0.0, 102400);
  const auto second = fp.second_stft();
  const auto m = ams(s, fp.first_stft(kFs), second);
  const std::size_t sb = 840;
  const double dc = m.values.at(sb, 0);
  double worst_db = -1e9;
  for (std::size_t b = dc_lobe_bins(second); b < m.values.cols; ++b) {
    const double db = (m.values.at(sb, b) - dc) * 20.0 / std::log(10.0);
    worst_db = std::max(worst_db, db);
  }
  CHECK(worst_db <= -30.0);
}

TEST_CASE("AM tone: peak modulation bin within one bin of 50 Hz") {
  config::FeatureParams fp;
  const Signal s = tone(21000.0, 50.0, 0.8, 102400);
  const auto second = fp.second_stft();
  const auto m = ams(s, fp.first_stft(kFs), second);
  const std::size_t sb = 840;
  std::size_t peak = dc_lobe_bins(second);
  for (std::size_t b = peak; b < m.values.cols; ++b)
    if (m.values.at(sb, b) > m.values.at(sb, peak)) peak = b;
  const double spacing = m.mod_freqs_hz[1];
  CHECK(std::abs(m.mod_freqs_hz[peak] - 50.0) <= spacing + 1e-9);
}

TEST_CASE("scalar of a constant region is cells times value") {
  AmsMatrix m;
  m.values = Mat<double>(10, 9, 0.25);
  m.center_freqs_hz.resize(10);
  m.mod_freqs_hz.resize(9);
  for (std::size_t s = 0; s < 10; ++s)
    m.center_freqs_hz[s] = static_cast<double>(s) * 1000.0;
  for (std::size_t b = 0; b < 9; ++b)
    m.mod_freqs_hz[b] = static_cast<double>(b) * 10.0;
  // center > 4500 -> 5 rows; 0 < mod < 45 -> 4 cols
  CHECK(ams_scalar(m, 4500.0, 45.0) == doctest::Approx(5 * 4 * 0.25));
  CHECK_THROWS_AS(ams_scalar(m, 100000.0, 45.0), DataError);
}

TEST_CASE("region containment is monotone on a non-negative matrix") {
  config::FeatureParams fp;
  const Signal s = tone(22000.0, 40.0, 0.5, 102400);
  auto m = ams(s, fp.first_stft(kFs), fp.second_stft());
  for (double& v : m.values.data) v = std::max(v, 0.0);
  CHECK(ams_scalar(m, 22000.0, 80.0) <= ams_scalar(m, 20000.0, 80.0));
}

TEST_CASE("shifting a stationary tone by one hop barely moves the matrix") {
  config::FeatureParams fp;
  const auto first = fp.first_stft(kFs);
  Signal longer = tone(21000.0, 0.0, 0.0, 102400 + first.hop);
  Signal a{std::vector<double>(longer.samples.begin(),
                               longer.samples.begin() + 102400),
           kFs};
  Signal b{std::vector<double>(longer.samples.begin() + first.hop,
                               longer.samples.end()),
           kFs};
  const auto ma = ams(a, first, fp.second_stft());
  const auto mb = ams(b, first, fp.second_stft());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ma.values.data.size(); ++i) {
    const double d = ma.values.data[i] - mb.values.data[i];
    num += d * d;
    den += ma.values.data[i] * ma.values.data[i];
  }
  CHECK(std::sqrt(num / den) < 0.01);
}

TEST_CASE("median aggregation is selectable") {
  config::FeatureParams fp;
  Rng rng(77);
  Signal s;
  s.sample_rate_hz = kFs;
  s.samples.resize(102400);
  for (double& v : s.samples) v = rng.gaussian();
  AmsOptions median;
  median.aggregation = AmsOptions::Aggregation::median;
  const auto a = ams(s, fp.first_stft(kFs), fp.second_stft());
  const auto b = ams(s, fp.first_stft(kFs), fp.second_stft(), median);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.values.data.size(); ++i)
    diff = std::max(diff, std::abs(a.values.data[i] - b.values.data[i]));
  CHECK(diff > 1e-6);
}

TEST_CASE("segments shorter than the second window span are rejected") {
  config::FeatureParams fp;
  const Signal s = tone(21000.0, 0.0, 0.0, 20000);  // < 512 ms of frames
  CHECK_THROWS_AS(ams(s, fp.first_stft(kFs), fp.second_stft()), DataError);
}

TEST_CASE("strict short-DFT variant truncates the first-stage frames") {
  config::FeatureParams fp;
  fp.strict_short_nfft = true;
  const auto first = fp.first_stft(kFs);
  CHECK(first.window.length == 512);
  CHECK(first.dft_length == 512);
  const Signal s = tone(21000.0, 50.0, 0.8, 102400);
  const auto m = ams(s, first, fp.second_stft());
  CHECK(m.values.rows == 257);
}

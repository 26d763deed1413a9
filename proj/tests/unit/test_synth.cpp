#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "vibrodiag/envelope_features.hpp"
#include "vibrodiag/synth.hpp"

using namespace vibrodiag;
using namespace vibrodiag::synth;

namespace {

const features::BearingGeometry kGeometry;  // generic example geometry

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2]
                      : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

// largest envelope magnitude near each of the first three harmonics of a
// fault frequency
double fault_line_amplitude(const features::EnvelopeSpectrum& spec,
                            double fault_hz) {
  double best = 0.0;
  for (int i = 1; i <= 3; ++i) {
    const std::size_t bin =
        features::nearest_bin(i * fault_hz, spec.bin_spacing_hz);
    for (std::size_t b = bin - 1; b <= bin + 1; ++b)
      best = std::max(best, spec.magnitudes[b]);
  }
  return best;
}

}  // namespace

TEST_CASE("same seed gives bit-identical output") {
  OperatingPoint op{1500.0, TorqueLevel::pct66, 2.0};
  FaultSpec fault{FaultKind::outer_race, 0.7, 21000.0};
  const Signal a = generate(op, fault, kGeometry, 987);
  const Signal b = generate(op, fault, kGeometry, 987);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    CHECK(a.samples[i] == b.samples[i]);
  const Signal c = generate(op, fault, kGeometry, 988);
  CHECK(a.samples != c.samples);
}

TEST_CASE("healthy signal shows no dominant fault line") {
  OperatingPoint op{500.0, TorqueLevel::pct33, 2.0};
  const Signal s = generate(op, {FaultKind::none, 0.0, 21000.0}, kGeometry, 41);
  const auto spec = features::envelope_spectrum(s);
  const auto faults = features::fault_frequencies(kGeometry, 500.0 / 60.0);

  // a line is dominant if it stands well above the local envelope floor
  for (double f : {faults.bpfo_hz, faults.bpfi_hz, faults.ca_hz, faults.re_hz})
    for (int i = 1; i <= 3; ++i) {
      const std::size_t bin =
          features::nearest_bin(i * f, spec.bin_spacing_hz);
      std::vector<double> local;
      for (std::size_t b = bin >= 50 ? bin - 50 : 1; b <= bin + 50; ++b)
        if (b + 2 < bin || b > bin + 2) local.push_back(spec.magnitudes[b]);
      CHECK(spec.magnitudes[bin] <= 3.0 * median_of(std::move(local)));
    }
}

TEST_CASE("outer-race fault puts the envelope peak at BPFO") {
  OperatingPoint op{500.0, TorqueLevel::pct33, 2.0};
  const Signal s =
      generate(op, {FaultKind::outer_race, 1.0, 21000.0}, kGeometry, 42);
  const auto spec = features::envelope_spectrum(s);
  const double fr = 500.0 / 60.0;
  const auto faults = features::fault_frequencies(kGeometry, fr);

  // peak over the fault band, skipping shaft-order beat lines
  const std::size_t lo = features::nearest_bin(15.0, spec.bin_spacing_hz);
  const std::size_t hi = features::nearest_bin(100.0, spec.bin_spacing_hz);
  std::size_t peak = 0;
  double peak_mag = -1.0;
  for (std::size_t b = lo; b <= hi; ++b) {
    const double f = static_cast<double>(b) * spec.bin_spacing_hz;
    const double order = f / fr;
    if (std::abs(order - std::round(order)) < 0.08) continue;
    if (spec.magnitudes[b] > peak_mag) {
      peak_mag = spec.magnitudes[b];
      peak = b;
    }
  }
  const std::size_t bpfo_bin =
      features::nearest_bin(faults.bpfo_hz, spec.bin_spacing_hz);
  CHECK(std::llabs(static_cast<long long>(peak) -
                   static_cast<long long>(bpfo_bin)) <= 1);
}

TEST_CASE("envelope line grows with severity") {
  OperatingPoint op{1000.0, TorqueLevel::pct33, 2.0};
  const auto faults = features::fault_frequencies(kGeometry, 1000.0 / 60.0);
  double prev = -1.0;
  for (double severity : {0.0, 0.5, 1.0}) {
    const FaultSpec fault{severity == 0.0 ? FaultKind::none
                                          : FaultKind::outer_race,
                          severity, 21000.0};
    const Signal s = generate(op, fault, kGeometry, 77);
    const auto spec = features::envelope_spectrum(s);
    const double amp = fault_line_amplitude(spec, faults.bpfo_hz);
    CHECK(amp >= prev);
    prev = amp;
  }
}

TEST_CASE("each localized kind seeds its own frequency") {
  OperatingPoint op{1500.0, TorqueLevel::pct0, 2.0};
  const double fr = 1500.0 / 60.0;
  const auto faults = features::fault_frequencies(kGeometry, fr);
  const std::pair<FaultKind, double> kinds[] = {
      {FaultKind::outer_race, faults.bpfo_hz},
      {FaultKind::inner_race, faults.bpfi_hz},
      {FaultKind::rolling_element, faults.re_hz},
  };
  for (const auto& [kind, freq] : kinds) {
    const Signal s = generate(op, {kind, 0.9, 21000.0}, kGeometry, 55);
    const auto spec = features::envelope_spectrum(s);
    const Signal h = generate(op, {FaultKind::none, 0.0, 21000.0}, kGeometry, 55);
    const auto spec_h = features::envelope_spectrum(h);
    CHECK(fault_line_amplitude(spec, freq) >
          2.0 * fault_line_amplitude(spec_h, freq));
  }
}

TEST_CASE("healthy per-second RMS is stationary") {
  OperatingPoint op{2000.0, TorqueLevel::pct100, 12.0};
  const Signal s = generate(op, {FaultKind::none, 0.0, 21000.0}, kGeometry, 91);
  const std::size_t per_second = 51200;
  std::vector<double> rms;
  for (std::size_t sec = 0; sec < 12; ++sec) {
    double acc = 0.0;
    for (std::size_t k = 0; k < per_second; ++k) {
      const double v = s.samples[sec * per_second + k];
      acc += v * v;
    }
    rms.push_back(std::sqrt(acc / static_cast<double>(per_second)));
  }
  const double lo = *std::min_element(rms.begin(), rms.end());
  const double hi = *std::max_element(rms.begin(), rms.end());
  CHECK(hi / lo < 1.2);
}

TEST_CASE("invariants of the fault specification are enforced") {
  OperatingPoint op{1500.0, TorqueLevel::pct33, 1.0};
  CHECK_THROWS_AS(
      generate(op, {FaultKind::none, 0.5, 21000.0}, kGeometry, 1), DataError);
  CHECK_THROWS_AS(
      generate(op, {FaultKind::outer_race, 0.0, 21000.0}, kGeometry, 1),
      DataError);
  OperatingPoint fast{4000.0, TorqueLevel::pct33, 1.0};
  CHECK_THROWS_AS(
      generate(fast, {FaultKind::none, 0.0, 21000.0}, kGeometry, 1), DataError);
}

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vibrodiag/rng.hpp"
#include "vibrodiag/time_features.hpp"

using namespace vibrodiag;
using namespace vibrodiag::features;

TEST_CASE("constant segment: basic stats defined, higher moments rejected") {
  const std::vector<double> ones{1, 1, 1, 1};
  CHECK(mean(ones) == 1.0);
  CHECK(sample_variance(ones) == 0.0);
  CHECK(*std::max_element(ones.begin(), ones.end()) -
            *std::min_element(ones.begin(), ones.end()) ==
        0.0);
  CHECK_THROWS_AS(extract_time_features(Signal{ones, 100.0}), DataError);
}

TEST_CASE("two-point hand evaluation") {
  const std::vector<double> x{0, 2};
  CHECK(mean(x) == doctest::Approx(1.0));
  CHECK(sample_variance(x) == doctest::Approx(2.0));
  // printed formula: sqrt(sum x^2 / (K-1)) = sqrt(4/1)
  CHECK(rms(x) == doctest::Approx(2.0));
}

TEST_CASE("gaussian draw has kurtosis near 3 and skewness near 0") {
  Rng rng(11);
  Signal s;
  s.sample_rate_hz = 1000.0;
  s.samples.resize(100000);
  for (double& v : s.samples) v = rng.gaussian();
  const auto f = extract_time_features(s);
  CHECK(std::abs(f.kurtosis - 3.0) < 0.1);
  CHECK(std::abs(f.skewness) < 0.05);
}

TEST_CASE("matches the direct oracle on random data") {
  Rng rng(12);
  Signal s;
  s.sample_rate_hz = 1000.0;
  s.samples.resize(4096);
  for (double& v : s.samples) v = rng.gaussian() + 0.3;
  const auto f = extract_time_features(s);
  const auto o = oracles::time_oracle(s.samples);
  CHECK(f.average == doctest::Approx(o.average).epsilon(1e-12));
  CHECK(f.variance == doctest::Approx(o.variance).epsilon(1e-12));
  CHECK(f.rms == doctest::Approx(o.rms).epsilon(1e-12));
  CHECK(f.kurtosis == doctest::Approx(o.kurtosis).epsilon(1e-10));
  CHECK(f.skewness == doctest::Approx(o.skewness).epsilon(1e-10));
  CHECK(f.amplitude_range == doctest::Approx(o.range).epsilon(1e-12));
  CHECK(f.peak_to_rms == doctest::Approx(o.peak_to_rms).epsilon(1e-12));
}

TEST_CASE("shift leaves centered statistics alone") {
  Rng rng(13);
  Signal s;
  s.sample_rate_hz = 1000.0;
  s.samples.resize(2048);
  for (double& v : s.samples) v = rng.gaussian();
  const auto base = extract_time_features(s);

  Signal shifted = s;
  const double c = 2.5;
  for (double& v : shifted.samples) v += c;
  const auto f = extract_time_features(shifted);
  CHECK(f.average == doctest::Approx(base.average + c).epsilon(1e-10));
  CHECK(f.variance == doctest::Approx(base.variance).epsilon(1e-9));
  CHECK(f.kurtosis == doctest::Approx(base.kurtosis).epsilon(1e-9));
  CHECK(f.skewness - base.skewness == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(f.amplitude_range ==
        doctest::Approx(base.amplitude_range).epsilon(1e-9));
}

TEST_CASE("positive scaling behaves homogeneously") {
  Rng rng(14);
  Signal s;
  s.sample_rate_hz = 1000.0;
  s.samples.resize(2048);
  for (double& v : s.samples) v = rng.gaussian();
  // zero the mean so the rms scaling law is exact
  const double m = mean(s.samples);
  for (double& v : s.samples) v -= m;
  const auto base = extract_time_features(s);

  const double a = 3.5;
  Signal scaled = s;
  for (double& v : scaled.samples) v *= a;
  const auto f = extract_time_features(scaled);
  CHECK(f.variance == doctest::Approx(a * a * base.variance).epsilon(1e-10));
  CHECK(f.rms == doctest::Approx(a * base.rms).epsilon(1e-10));
  CHECK(f.amplitude_range ==
        doctest::Approx(a * base.amplitude_range).epsilon(1e-10));
  CHECK(f.kurtosis == doctest::Approx(base.kurtosis).epsilon(1e-10));
  CHECK(f.skewness - base.skewness == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(f.peak_to_rms == doctest::Approx(base.peak_to_rms).epsilon(1e-10));
}

TEST_CASE("rms identity under the mixed normalizations") {
  Rng rng(15);
  Signal s;
  s.sample_rate_hz = 1000.0;
  s.samples.resize(1024);
  for (double& v : s.samples) v = rng.gaussian() + 1.2;
  const auto f = extract_time_features(s);
  const double k = static_cast<double>(s.samples.size());
  // sum x^2 = sum (x - mean)^2 + K mean^2, both sides divided by K-1
  const double expected =
      f.variance + k * f.average * f.average / (k - 1.0);
  CHECK(f.rms * f.rms == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("absolute-peak toggle picks the magnitude peak") {
  Signal s;
  s.sample_rate_hz = 100.0;
  s.samples = {-5.0, 1.0, 2.0, 1.0};
  const auto raw = extract_time_features(s);
  TimeFeatureOptions opts;
  opts.absolute_peak = true;
  const auto abs_peak = extract_time_features(s, opts);
  CHECK(raw.peak_to_rms * 5.0 / 2.0 ==
        doctest::Approx(abs_peak.peak_to_rms).epsilon(1e-12));
}

TEST_CASE("short segments are rejected") {
  Signal s{{1.0, 2.0, 3.0}, 100.0};
  CHECK_THROWS_AS(extract_time_features(s), DataError);
}

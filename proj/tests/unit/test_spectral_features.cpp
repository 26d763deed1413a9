#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vibrodiag/rng.hpp"
#include "vibrodiag/spectral_features.hpp"

using namespace vibrodiag;
using namespace vibrodiag::features;

namespace {

std::vector<double> linspace_freqs(std::size_t n, double df) {
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<double>(i) * df;
  return f;
}

}  // namespace

TEST_CASE("single nonzero bin") {
  const std::size_t n = 40;
  std::vector<double> mags(n, 0.0);
  const auto freqs = linspace_freqs(n, 100.0);  // bin 10 -> 1 kHz
  mags[10] = 2.5;
  const auto f = extract_spectral_features(mags, freqs);
  CHECK(f.centroid_hz == doctest::Approx(1000.0));
  CHECK(f.spread_hz == doctest::Approx(0.0));
  CHECK(f.rolloff_hz == doctest::Approx(1000.0));
  CHECK(f.crest == doctest::Approx(static_cast<double>(n)));
  CHECK(f.entropy == doctest::Approx(0.0));
  CHECK(f.kurtosis == 0.0);  // degenerate spread convention
}

TEST_CASE("uniform magnitudes") {
  const std::size_t n = 64;
  std::vector<double> mags(n, 0.7);
  const auto freqs = linspace_freqs(n, 10.0);
  const auto f = extract_spectral_features(mags, freqs);
  CHECK(f.crest == doctest::Approx(1.0));
  // normalized entropy of a flat spectrum: ln(n) / ln(n-1)
  const double expected = std::log(64.0) / std::log(63.0);
  CHECK(f.entropy == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(f.entropy - 1.0) < 0.01);
}

TEST_CASE("random spectrum matches the direct-sum oracle") {
  Rng rng(21);
  const std::size_t n = 64;
  std::vector<double> mags(n);
  for (double& v : mags) v = std::abs(rng.gaussian()) + 0.01;
  const auto freqs = linspace_freqs(n, 25.0);
  const auto f = extract_spectral_features(mags, freqs);
  const auto o = oracles::spectral_oracle(mags, freqs, 0.95);
  CHECK(std::abs(f.centroid_hz - o.centroid) < 1e-10 * o.centroid);
  CHECK(std::abs(f.spread_hz - o.spread) < 1e-10 * o.spread);
  CHECK(std::abs(f.kurtosis - o.kurtosis) < 1e-10 * o.kurtosis);
  CHECK(std::abs(f.entropy - o.entropy) < 1e-10);
  CHECK(std::abs(f.crest - o.crest) < 1e-10 * o.crest);
  CHECK(f.rolloff_hz == o.rolloff);
}

TEST_CASE("scale invariance") {
  Rng rng(22);
  const std::size_t n = 48;
  std::vector<double> mags(n);
  for (double& v : mags) v = std::abs(rng.gaussian()) + 0.05;
  const auto freqs = linspace_freqs(n, 12.5);
  const auto base = extract_spectral_features(mags, freqs);
  std::vector<double> scaled = mags;
  for (double& v : scaled) v *= 37.5;
  const auto f = extract_spectral_features(scaled, freqs);
  CHECK(f.centroid_hz == doctest::Approx(base.centroid_hz).epsilon(1e-12));
  CHECK(f.spread_hz == doctest::Approx(base.spread_hz).epsilon(1e-12));
  CHECK(f.kurtosis == doctest::Approx(base.kurtosis).epsilon(1e-12));
  CHECK(f.entropy == doctest::Approx(base.entropy).epsilon(1e-12));
  CHECK(f.crest == doctest::Approx(base.crest).epsilon(1e-12));
  CHECK(f.rolloff_hz == base.rolloff_hz);
}

TEST_CASE("literal entropy form is scale dependent, flag works") {
  std::vector<double> mags{0.5, 1.0, 0.25, 0.125};
  const auto freqs = linspace_freqs(4, 10.0);
  SpectralOptions literal;
  literal.normalized_entropy = false;
  const auto a = extract_spectral_features(mags, freqs, literal);
  for (double& v : mags) v *= 2.0;
  const auto b = extract_spectral_features(mags, freqs, literal);
  CHECK(a.entropy != doctest::Approx(b.entropy));
}

TEST_CASE("rolloff is monotone in kappa") {
  Rng rng(23);
  const std::size_t n = 96;
  std::vector<double> mags(n);
  for (double& v : mags) v = std::abs(rng.gaussian());
  const auto freqs = linspace_freqs(n, 5.0);
  double prev = 0.0;
  for (double kappa : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    SpectralOptions opts;
    opts.kappa = kappa;
    const auto f = extract_spectral_features(mags, freqs, opts);
    CHECK(f.rolloff_hz >= prev);
    prev = f.rolloff_hz;
  }
}

TEST_CASE("two equal bins equidistant from the centroid have kurtosis 1") {
  std::vector<double> mags(32, 0.0);
  const auto freqs = linspace_freqs(32, 50.0);
  mags[8] = 1.0;
  mags[24] = 1.0;
  const auto f = extract_spectral_features(mags, freqs);
  CHECK(f.kurtosis == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate inputs are rejected") {
  const auto freqs = linspace_freqs(8, 10.0);
  CHECK_THROWS_AS(
      extract_spectral_features(std::vector<double>(8, 0.0), freqs),
      DataError);
  std::vector<double> neg(8, 1.0);
  neg[3] = -0.5;
  CHECK_THROWS_AS(extract_spectral_features(neg, freqs), DataError);
}

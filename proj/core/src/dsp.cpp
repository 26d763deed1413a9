#include "vibrodiag/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace vibrodiag {

void validate(const Signal& signal) {
  if (signal.samples.empty()) throw DataError("signal has no samples");
  if (!(signal.sample_rate_hz > 0.0))
    throw DataError("sample rate must be positive");
  for (double v : signal.samples) {
    if (!std::isfinite(v)) throw DataError("signal contains non-finite sample");
  }
}

}  // namespace vibrodiag

namespace vibrodiag::dsp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey; data.size() must be a power of two.
void fft_pow2(std::vector<cdouble>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n < 2) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
    const cdouble wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cdouble w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cdouble u = data[i + k];
        const cdouble v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : data) v *= inv;
  }
}

// Bluestein chirp-z: arbitrary-length DFT through a power-of-two
// circular convolution. Chirp and the transformed kernel are cached per
// length and thread; the same lengths recur thousands of times during
// batch feature extraction.
struct BluesteinPlan {
  std::vector<cdouble> chirp;     // forward-sign chirp, length n
  std::vector<cdouble> kernel_f;  // FFT of conj-chirp kernel, length m
  std::size_t m = 0;
};

const BluesteinPlan& bluestein_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, BluesteinPlan> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  BluesteinPlan plan;
  plan.m = next_pow2(2 * n - 1);
  plan.chirp.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the argument small for long inputs
    const std::size_t k2 = (k * k) % (2 * n);
    const double ang = -std::numbers::pi * static_cast<double>(k2) /
                       static_cast<double>(n);
    plan.chirp[k] = cdouble(std::cos(ang), std::sin(ang));
  }
  plan.kernel_f.assign(plan.m, cdouble(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    plan.kernel_f[k] = std::conj(plan.chirp[k]);
    if (k != 0) plan.kernel_f[plan.m - k] = std::conj(plan.chirp[k]);
  }
  fft_pow2(plan.kernel_f, false);
  return cache.emplace(n, std::move(plan)).first->second;
}

void fft_bluestein(std::vector<cdouble>& data, bool inverse) {
  const std::size_t n = data.size();
  const BluesteinPlan& plan = bluestein_plan(n);
  const std::size_t m = plan.m;

  // the inverse transform runs the forward machinery on conjugated data
  if (inverse)
    for (auto& v : data) v = std::conj(v);

  std::vector<cdouble> a(m, cdouble(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) a[k] = data[k] * plan.chirp[k];

  fft_pow2(a, false);
  for (std::size_t k = 0; k < m; ++k) a[k] *= plan.kernel_f[k];
  fft_pow2(a, true);

  for (std::size_t k = 0; k < n; ++k) data[k] = a[k] * plan.chirp[k];
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : data) v = std::conj(v) * inv;
  }
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {

// Cooley-Tukey split for n = A * B with A a power of two and B odd and
// small: B column FFTs of length A, then B-point direct sums with cached
// twiddles. Much cheaper than Bluestein for the segment lengths this
// toolkit meets (e.g. 102400 = 4096 * 25).
struct MixedPlan {
  std::size_t a = 0, b = 0;
  std::vector<cdouble> twiddle;  // W_n^k for k = 0..n-1, forward sign
};

const MixedPlan& mixed_plan(std::size_t n, std::size_t a, std::size_t b) {
  thread_local std::unordered_map<std::size_t, MixedPlan> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  MixedPlan plan;
  plan.a = a;
  plan.b = b;
  plan.twiddle.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    plan.twiddle[k] = cdouble(std::cos(ang), std::sin(ang));
  }
  return cache.emplace(n, std::move(plan)).first->second;
}

void fft_mixed(std::vector<cdouble>& data, bool inverse, std::size_t a,
               std::size_t b) {
  const std::size_t n = data.size();
  const MixedPlan& plan = mixed_plan(n, a, b);
  if (inverse)
    for (auto& v : data) v = std::conj(v);

  // columns col_bb[aa] = x[aa*b + bb], each transformed at length a
  std::vector<std::vector<cdouble>> cols(b, std::vector<cdouble>(a));
  for (std::size_t aa = 0; aa < a; ++aa)
    for (std::size_t bb = 0; bb < b; ++bb) cols[bb][aa] = data[aa * b + bb];
  for (auto& col : cols) fft_pow2(col, false);

  // X[k] = sum_bb cols[bb][k mod a] * W_n^(bb*k)
  for (std::size_t k = 0; k < n; ++k) {
    const cdouble w = plan.twiddle[k];
    const std::size_t r = k & (a - 1);
    cdouble t(1.0, 0.0);
    cdouble acc(0.0, 0.0);
    for (std::size_t bb = 0; bb < b; ++bb) {
      acc += cols[bb][r] * t;
      t *= w;
    }
    data[k] = acc;
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : data) v = std::conj(v) * inv;
  }
}

}  // namespace

void fft(std::vector<cdouble>& data, bool inverse) {
  if (data.size() < 2) return;
  if (is_pow2(data.size())) {
    fft_pow2(data, inverse);
    return;
  }
  std::size_t a = 1, b = data.size();
  while (b % 2 == 0) {
    a <<= 1;
    b >>= 1;
  }
  if (a >= 2 && b <= 45) {
    fft_mixed(data, inverse, a, b);
  } else {
    fft_bluestein(data, inverse);
  }
}

std::vector<double> window_samples(const WindowSpec& spec) {
  if (spec.length == 0) throw DataError("window length must be positive");
  if (spec.kind != WindowKind::rectangular && spec.length < 2)
    throw DataError("tapered windows need length >= 2");
  std::vector<double> w(spec.length, 1.0);
  const double n = static_cast<double>(spec.length);
  switch (spec.kind) {
    case WindowKind::hann:
      for (std::size_t k = 0; k < spec.length; ++k)
        w[k] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(k) / n);
      break;
    case WindowKind::hamming:
      for (std::size_t k = 0; k < spec.length; ++k)
        w[k] = 0.54 - 0.46 * std::cos(kTwoPi * static_cast<double>(k) / n);
      break;
    case WindowKind::rectangular:
      break;
  }
  return w;
}

Spectrum dft(std::span<const double> segment, std::size_t dft_length,
             double sample_rate_hz) {
  if (segment.empty()) throw DataError("dft: empty segment");
  if (dft_length < 1) throw DataError("dft: dft_length must be >= 1");
  if (segment.size() > dft_length)
    throw DataError("dft: segment longer than dft_length");

  Spectrum out;
  out.dft_length = dft_length;
  out.bin_spacing_hz =
      sample_rate_hz > 0.0 ? sample_rate_hz / static_cast<double>(dft_length)
                           : 0.0;
  out.bins.assign(dft_length, cdouble(0.0, 0.0));
  for (std::size_t k = 0; k < segment.size(); ++k)
    out.bins[k] = cdouble(segment[k], 0.0);
  fft(out.bins, false);
  return out;
}

StftGrid stft(const Signal& signal, const WindowSpec& window, std::size_t hop,
              std::size_t dft_length) {
  validate(signal);
  if (hop < 1) throw DataError("stft: hop must be >= 1");
  if (window.length > dft_length)
    throw DataError("stft: window longer than dft_length");
  if (window.length > signal.samples.size())
    throw DataError("stft: signal shorter than one window");

  const std::size_t n_frames =
      (signal.samples.size() - window.length) / hop + 1;
  const std::vector<double> w = window_samples(window);

  StftGrid grid;
  grid.window_len = window.length;
  grid.hop = hop;
  grid.dft_length = dft_length;
  grid.frame_rate_hz = signal.sample_rate_hz / static_cast<double>(hop);
  grid.bin_spacing_hz =
      signal.sample_rate_hz / static_cast<double>(dft_length);
  grid.values = Mat<cdouble>(dft_length, n_frames);

  // two real frames per complex transform
  std::vector<cdouble> buf(dft_length);
  const std::size_t m = dft_length;
  for (std::size_t n = 0; n < n_frames; n += 2) {
    std::fill(buf.begin(), buf.end(), cdouble(0.0, 0.0));
    const double* seg_a = signal.samples.data() + n * hop;
    const bool pair = n + 1 < n_frames;
    const double* seg_b = pair ? seg_a + hop : nullptr;
    for (std::size_t k = 0; k < window.length; ++k)
      buf[k] = cdouble(seg_a[k] * w[k], pair ? seg_b[k] * w[k] : 0.0);
    fft(buf, false);
    for (std::size_t mu = 0; mu < m; ++mu) {
      const cdouble z = buf[mu];
      const cdouble zr = std::conj(buf[(m - mu) % m]);
      grid.values.at(mu, n) = 0.5 * (z + zr);
      if (pair) grid.values.at(mu, n + 1) = cdouble(0.0, -0.5) * (z - zr);
    }
  }
  return grid;
}

std::vector<double> analytic_envelope(const Signal& signal) {
  validate(signal);
  const std::size_t n = signal.samples.size();
  if (n < 4) throw DataError("analytic_envelope: need at least 4 samples");

  std::vector<cdouble> spec(n);
  for (std::size_t k = 0; k < n; ++k)
    spec[k] = cdouble(signal.samples[k], 0.0);
  fft(spec, false);

  // keep DC and Nyquist, double positives, zero negatives
  const std::size_t half = n / 2;
  if (n % 2 == 0) {
    for (std::size_t k = 1; k < half; ++k) spec[k] *= 2.0;
    for (std::size_t k = half + 1; k < n; ++k) spec[k] = cdouble(0.0, 0.0);
  } else {
    for (std::size_t k = 1; k <= half; ++k) spec[k] *= 2.0;
    for (std::size_t k = half + 1; k < n; ++k) spec[k] = cdouble(0.0, 0.0);
  }
  fft(spec, true);

  std::vector<double> env(n);
  for (std::size_t k = 0; k < n; ++k) env[k] = std::abs(spec[k]);
  return env;
}

std::vector<double> dct_ii(std::span<const double> values) {
  if (values.empty()) throw DataError("dct_ii: empty input");
  const std::size_t K = values.size();
  std::vector<double> out(K, 0.0);
  for (std::size_t mu = 1; mu <= K; ++mu) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= K; ++i) {
      acc += values[i - 1] *
             std::cos(std::numbers::pi * static_cast<double>(2 * i - 1) *
                      static_cast<double>(mu) / (2.0 * static_cast<double>(K)));
    }
    out[mu - 1] = acc;
  }
  return out;
}

std::vector<double> one_sided_magnitudes(const Spectrum& spectrum) {
  const std::size_t half = spectrum.dft_length / 2;
  std::vector<double> mags(half + 1);
  for (std::size_t mu = 0; mu <= half; ++mu)
    mags[mu] = std::abs(spectrum.bins[mu]);
  return mags;
}

}  // namespace vibrodiag::dsp

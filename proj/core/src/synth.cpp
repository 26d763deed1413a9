#include "vibrodiag/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vibrodiag/rng.hpp"

namespace vibrodiag::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double block_rms(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::max(std::sqrt(acc / static_cast<double>(v.size())), 1e-12);
}

// sin(w k + phase) for k = 0.. via complex rotation; far cheaper than a
// std::sin call per sample and exactly reproducible
void add_oscillator(std::vector<double>& x, double amp, double freq_hz,
                    double phase, double fs) {
  const double w = kTwoPi * freq_hz / fs;
  double zr = std::cos(phase), zi = std::sin(phase);
  const double cr = std::cos(w), ci = std::sin(w);
  for (double& v : x) {
    v += amp * zi;
    const double nr = zr * cr - zi * ci;
    zi = zr * ci + zi * cr;
    zr = nr;
  }
}

// Two cascaded one-pole lowpasses, output normalized to RMS sigma.
std::vector<double> lowpass_noise(Rng& rng, std::size_t n, double sigma,
                                  double fc, double fs) {
  const double a = std::exp(-kTwoPi * fc / fs);
  const double b = 1.0 - a;
  std::vector<double> y(n);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s1 = a * s1 + b * rng.gaussian();
    s2 = a * s2 + b * s1;
    y[i] = s2;
  }
  const double scale = sigma / block_rms(y);
  for (double& v : y) v *= scale;
  return y;
}

// Two-pole resonator driven by white noise, RMS-normalized.
std::vector<double> resonator_noise(Rng& rng, std::size_t n, double sigma,
                                    double fc, double bw, double fs) {
  const double r = std::exp(-std::numbers::pi * bw / fs);
  const double c = 2.0 * r * std::cos(kTwoPi * fc / fs);
  const double r2 = r * r;
  const double b0 = 0.5 * (1.0 - r2);
  std::vector<double> y(n);
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = rng.gaussian();
    const double out = b0 * (x0 - x2) + c * y1 - r2 * y2;
    x2 = x1;
    x1 = x0;
    y2 = y1;
    y1 = out;
    y[i] = out;
  }
  const double scale = sigma / block_rms(y);
  for (double& v : y) v *= scale;
  return y;
}

void add_burst(std::vector<double>& x, std::size_t pos, double tau, double f,
               double amp, double phase, double fs) {
  const std::size_t len =
      std::min(x.size() - pos,
               static_cast<std::size_t>(8.0 * tau * fs) + 1);
  for (std::size_t k = 0; k < len; ++k) {
    const double t = static_cast<double>(k) / fs;
    x[pos + k] += amp * std::exp(-t / tau) * std::sin(kTwoPi * f * t + phase);
  }
}

struct Mode {
  double rel_freq;
  double tau_s;
  double rel_amp;
};

// Structural modes rung by every fault impact, relative to resonance_hz,
// plus a short broadband skirt.
constexpr Mode kModes[] = {
    {0.62, 1.20e-3, 0.90},
    {0.80, 1.00e-3, 1.00},
    {1.02, 0.70e-3, 0.90},
    {1.07, 0.13e-3, 0.80},
};

void add_mode_burst(std::vector<double>& x, std::size_t pos, double res_hz,
                    double amp, Rng& rng, double fs) {
  for (const Mode& m : kModes) {
    const double a = amp * m.rel_amp * rng.uniform(0.8, 1.2);
    add_burst(x, pos, m.tau_s, m.rel_freq * res_hz, a,
              rng.uniform(0.0, kTwoPi), fs);
  }
  add_burst(x, pos, 4.5e-5, 0.81 * res_hz, 0.5 * amp, rng.uniform(0.0, kTwoPi),
            fs);
}

void add_impulse_train(std::vector<double>& x, Rng& rng, double rate_hz,
                       double amp, double res_hz, double fs,
                       double jitter = 0.01) {
  const double period = fs / rate_hz;
  double pos = rng.uniform(0.0, period);
  while (pos < static_cast<double>(x.size())) {
    add_mode_burst(x, static_cast<std::size_t>(pos), res_hz, amp, rng, fs);
    pos += period * (1.0 + jitter * rng.uniform(-1.0, 1.0));
  }
}

}  // namespace

FaultKind fault_kind_from_string(const std::string& s) {
  if (s == "none") return FaultKind::none;
  if (s == "outer_race") return FaultKind::outer_race;
  if (s == "inner_race") return FaultKind::inner_race;
  if (s == "cage") return FaultKind::cage;
  if (s == "rolling_element") return FaultKind::rolling_element;
  if (s == "distributed") return FaultKind::distributed;
  throw DataError("unknown fault kind '" + s + "'");
}

std::string to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::none: return "none";
    case FaultKind::outer_race: return "outer_race";
    case FaultKind::inner_race: return "inner_race";
    case FaultKind::cage: return "cage";
    case FaultKind::rolling_element: return "rolling_element";
    case FaultKind::distributed: return "distributed";
  }
  throw DataError("invalid fault kind value");
}

Signal generate(const OperatingPoint& op, const FaultSpec& fault,
                const features::BearingGeometry& geometry, std::uint64_t seed,
                double sample_rate_hz) {
  if (!(op.rotational_speed_rpm >= 500.0 &&
        op.rotational_speed_rpm <= 3500.0))
    throw DataError("synth: speed outside the 500..3500 rpm range");
  if (!(op.duration_s > 0.0)) throw DataError("synth: duration must be > 0");
  if (fault.severity < 0.0 || fault.severity > 1.0)
    throw DataError("synth: severity must lie in [0, 1]");
  if ((fault.kind == FaultKind::none) != (fault.severity == 0.0))
    throw DataError("synth: severity must be 0 exactly for kind none");

  const double fs = sample_rate_hz;
  const std::size_t n = static_cast<std::size_t>(op.duration_s * fs);
  const double fr = op.rotational_speed_rpm / 60.0;
  const double torque = static_cast<double>(static_cast<int>(op.torque_level));
  Rng rng(seed);

  std::vector<double> x(n, 0.0);

  // shaft harmonics
  {
    const double amps[] = {0.5, 0.25, 0.12};
    for (int h = 1; h <= 3; ++h) {
      const double ph = rng.uniform(0.0, kTwoPi);
      const double w = kTwoPi * static_cast<double>(h) * fr / fs;
      for (std::size_t k = 0; k < n; ++k)
        x[k] += amps[h - 1] * std::sin(w * static_cast<double>(k) + ph);
    }
  }

  // torque- and speed-scaled broadband, lowpassed
  const double sig_lf =
      (0.07 + 0.04 * torque / 100.0) * (0.9 + 0.2 * fr / 30.0);
  {
    const double fc = 5000.0 + 40.0 * fr + rng.uniform(-300.0, 300.0);
    const std::vector<double> lp = lowpass_noise(rng, n, sig_lf, fc, fs);
    for (std::size_t k = 0; k < n; ++k) x[k] += lp[k];
  }

  // low band amplitude-modulated by a slow load wobble
  {
    const std::vector<double> wob = lowpass_noise(rng, n, 1.0, 20.0, fs);
    const double m = rng.uniform(0.25, 0.45);
    const std::vector<double> band =
        lowpass_noise(rng, n, 0.6 * sig_lf, 1500.0, fs);
    for (std::size_t k = 0; k < n; ++k)
      x[k] += band[k] * (1.0 + m * std::clamp(wob[k], -2.0, 2.0));
  }

  // sensor noise floor
  {
    const double sigma =
        0.007 * (1.0 + fr / 25.0) * std::exp(rng.uniform(-0.3, 0.3));
    for (std::size_t k = 0; k < n; ++k) x[k] += sigma * rng.gaussian();
  }

  // broadband tilt drift: a high-passed noise component whose share wanders
  // record to record (sensor coupling / temperature)
  {
    const double sigma =
        0.006 * (1.0 + fr / 25.0) * std::exp(rng.uniform(-0.5, 0.5));
    const double beta = rng.uniform(0.2, 0.8);
    const double a = std::exp(-kTwoPi * 8000.0 / fs);
    double prev_in = 0.0, prev_out = 0.0;
    std::vector<double> tilt(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = rng.gaussian();
      const double hp = 0.5 * (1.0 + a) * (w - prev_in) + a * prev_out;
      prev_in = w;
      prev_out = hp;
      tilt[k] = (1.0 - beta) * w + beta * hp;
    }
    const double scale = sigma / block_rms(tilt);
    for (std::size_t k = 0; k < n; ++k) x[k] += scale * tilt[k];
  }

  // broad high-frequency shelf, level wanders record to record
  {
    const double sigma =
        std::exp(rng.uniform(-0.8, 0.8)) * 0.007 * (1.0 + fr / 25.0);
    const double cf = 22000.0 + rng.uniform(-800.0, 800.0);
    const double bw = 5000.0 + rng.uniform(-500.0, 500.0);
    const std::vector<double> shelf = resonator_noise(rng, n, sigma, cf, bw, fs);
    for (std::size_t k = 0; k < n; ++k) x[k] += shelf[k];
  }

  // two very broad spectral bumps wander per record; the smooth gain
  // profile dominates the low-order band structure
  for (int b = 0; b < 2; ++b) {
    const double sigma =
        0.005 * (1.0 + fr / 25.0) * std::exp(rng.uniform(-0.9, 0.9));
    const double cf = rng.uniform(3000.0, 20000.0);
    const double bw = rng.uniform(8000.0, 14000.0);
    const std::vector<double> bump = resonator_noise(rng, n, sigma, cf, bw, fs);
    for (std::size_t k = 0; k < n; ++k) x[k] += bump[k];
  }

  // structural resonances, centers creep up with speed
  {
    const double params[][3] = {{3500.0, 2000.0, 0.030},
                                {7200.0, 2600.0, 0.022},
                                {11800.0, 3200.0, 0.015}};
    for (const auto& p : params) {
      const double cf =
          p[0] * (1.0 + 0.10 * fr / 58.3) + rng.uniform(-250.0, 250.0);
      const double bw = p[1] + rng.uniform(-200.0, 200.0);
      const double sigma =
          p[2] * (1.0 + fr / 25.0) * std::exp(rng.uniform(-0.2, 0.2));
      const std::vector<double> res = resonator_noise(rng, n, sigma, cf, bw, fs);
      for (std::size_t k = 0; k < n; ++k) x[k] += res[k];
    }
  }

  // converter carriers with weak +-120 Hz sidebands
  {
    const double carriers[][2] = {{6300.0, 0.10}, {9700.0, 0.07}};
    const double amp_jitter[] = {0.15, 0.20};
    for (int c = 0; c < 2; ++c) {
      const double a =
          carriers[c][1] * std::exp(rng.uniform(-amp_jitter[c], amp_jitter[c]));
      const double f = carriers[c][0];
      const double ph0 = rng.uniform(0.0, kTwoPi);
      const double ph1 = rng.uniform(0.0, kTwoPi);
      const double ph2 = rng.uniform(0.0, kTwoPi);
      for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / fs;
        x[k] += a * std::sin(kTwoPi * f * t + ph0);
        x[k] += 0.25 * a * std::sin(kTwoPi * (f + 120.0) * t + ph1);
        x[k] += 0.25 * a * std::sin(kTwoPi * (f - 120.0) * t + ph2);
      }
    }
  }

  // sparse environmental impacts
  {
    const int count = rng.poisson(1.2 * op.duration_s);
    for (int i = 0; i < count; ++i) {
      const std::size_t pos = rng.below(n);
      const double fc = rng.uniform(3000.0, 14000.0);
      const double amp = rng.lognormal(-0.3, 0.5);
      add_burst(x, pos, 3e-4, fc, amp, rng.uniform(0.0, kTwoPi), fs);
    }
  }

  if (fault.kind != FaultKind::none) {
    const features::FaultFrequencies ff =
        features::fault_frequencies(geometry, fr);
    if (fault.kind == FaultKind::distributed) {
      const double rates[] = {ff.bpfo_hz, ff.bpfi_hz, ff.re_hz, ff.ca_hz};
      for (double rate : rates)
        add_impulse_train(x, rng, rate, 0.27 * fault.severity,
                          fault.resonance_hz, fs);
      const std::vector<double> rough =
          lowpass_noise(rng, n, 0.035 * fault.severity, 6000.0, fs);
      for (std::size_t k = 0; k < n; ++k) x[k] += rough[k];
      const std::vector<double> hf_rough =
          resonator_noise(rng, n, 0.014 * fault.severity, 19500.0, 7000.0, fs);
      for (std::size_t k = 0; k < n; ++k) x[k] += hf_rough[k];
    } else {
      double rate = ff.bpfo_hz;
      switch (fault.kind) {
        case FaultKind::outer_race: rate = ff.bpfo_hz; break;
        case FaultKind::inner_race: rate = ff.bpfi_hz; break;
        case FaultKind::cage: rate = ff.ca_hz; break;
        case FaultKind::rolling_element: rate = ff.re_hz; break;
        default: break;
      }
      add_impulse_train(x, rng, rate, 0.70 * fault.severity,
                        fault.resonance_hz, fs);
    }
  }

  return Signal{std::move(x), fs};
}

}  // namespace vibrodiag::synth

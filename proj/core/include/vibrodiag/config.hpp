#ifndef VIBRODIAG_CONFIG_HPP
#define VIBRODIAG_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vibrodiag/ams.hpp"
#include "vibrodiag/dsp.hpp"
#include "vibrodiag/envelope_features.hpp"
#include "vibrodiag/mel.hpp"
#include "vibrodiag/ocsvm.hpp"
#include "vibrodiag/spectral_features.hpp"
#include "vibrodiag/time_features.hpp"

namespace vibrodiag::config {

struct SegmentationParams {
  double frame_seconds = 2.0;
  double dismiss_rpm_range_fraction = 0.01;
};

/// Everything the feature extractors need, with the 51.2 kHz defaults.
struct FeatureParams {
  dsp::WindowKind window = dsp::WindowKind::hann;
  double frame_ms = 25.0;
  double hop_ms = 4.0;
  bool strict_short_nfft = false;  // truncate frames to a 512-point DFT
  std::size_t mel_filters = 26;
  std::size_t mfcc_count = 13;
  bool mel_area_normalized = true;
  double log_floor = 1e-12;
  bool median_aggregation = false;
  double spectral_kappa = 0.95;
  bool spectral_normalized_entropy = true;
  bool env_slip_search = false;
  bool time_absolute_peak = false;
  double ams_min_center_hz = 20000.0;
  double ams_max_mod_hz = 80.0;
  std::size_t ams_second_window_frames = 128;
  std::size_t ams_second_hop_frames = 64;
  std::size_t ams_second_nfft = 256;

  features::StftConfig first_stft(double sample_rate_hz) const;
  features::StftConfig second_stft() const;
  features::MfccConfig mfcc_config(double sample_rate_hz) const;
};

struct SvmParams {
  ocsvm::KernelForm kernel = ocsvm::KernelForm::gaussian_squared;
  std::vector<double> nu_grid = ocsvm::default_nu_grid();
  std::vector<double> gamma_grid = ocsvm::default_gamma_grid();
  double tolerance = 1e-6;
  std::size_t max_pair_updates = 10'000'000;

  ocsvm::TrainOptions train_options() const {
    return {kernel, tolerance, max_pair_updates};
  }
};

struct ExperimentParams {
  std::string feature_set = "MFCC";
  bool with_fr = true;
  std::size_t repetitions = 10;
  std::size_t train_size = 500;
  std::size_t eval_size = 50;
  std::uint64_t seed = 42;
};

struct SynthParams {
  std::uint64_t seed = 1234;
  double record_seconds = 12.0;
  std::size_t segments_healthy = 60;
  std::size_t segments_outer_race = 60;
  std::size_t segments_distributed = 60;
  double resonance_hz = 21000.0;
  double severity_outer_min = 0.4;
  double severity_outer_max = 0.8;
  double severity_distributed_min = 0.6;
  double severity_distributed_max = 1.0;
};

struct ToolkitConfig {
  double sample_rate_hz = 51200.0;
  features::BearingGeometry geometry;
  SegmentationParams segmentation;
  FeatureParams features;
  SvmParams svm;
  ExperimentParams experiment;
  SynthParams synth;
};

/// Parses the JSON configuration; missing keys keep their defaults,
/// unknown keys are rejected.
ToolkitConfig parse_config(const std::string& json_text);
ToolkitConfig load_config(const std::string& path);
std::string default_config_json();

}  // namespace vibrodiag::config

#endif

#include "vibrodiag/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace vibrodiag::config {

using nlohmann::json;

features::StftConfig FeatureParams::first_stft(double sample_rate_hz) const {
  features::StftConfig cfg;
  const auto win = static_cast<std::size_t>(
      std::llround(frame_ms * 1e-3 * sample_rate_hz));
  cfg.hop =
      static_cast<std::size_t>(std::llround(hop_ms * 1e-3 * sample_rate_hz));
  if (strict_short_nfft) {
    cfg.window = {window, std::min<std::size_t>(win, 512)};
    cfg.dft_length = 512;
  } else {
    cfg.window = {window, win};
    cfg.dft_length = dsp::next_pow2(win);
  }
  return cfg;
}

features::StftConfig FeatureParams::second_stft() const {
  return {{window, ams_second_window_frames}, ams_second_hop_frames,
          ams_second_nfft};
}

features::MfccConfig FeatureParams::mfcc_config(double sample_rate_hz) const {
  const features::StftConfig first = first_stft(sample_rate_hz);
  features::MfccConfig cfg;
  cfg.frame = first.window;
  cfg.hop = first.hop;
  cfg.n_kept = mfcc_count;
  cfg.log_floor = log_floor;
  cfg.area_normalized = mel_area_normalized;
  cfg.aggregation = median_aggregation
                        ? features::MfccConfig::Aggregation::median
                        : features::MfccConfig::Aggregation::mean;
  return cfg;
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const std::string& section) {
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : keys)
      if (key == k) {
        known = true;
        break;
      }
    if (!known)
      throw DataError("config: unknown key '" + key + "' in " + section);
  }
}

dsp::WindowKind window_from_string(const std::string& s) {
  if (s == "hann") return dsp::WindowKind::hann;
  if (s == "hamming") return dsp::WindowKind::hamming;
  if (s == "rectangular") return dsp::WindowKind::rectangular;
  throw DataError("config: unknown window kind '" + s + "'");
}

}  // namespace

ToolkitConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DataError(std::string("config: invalid JSON: ") + e.what());
  }

  ToolkitConfig cfg;
  reject_unknown(j,
                 {"sample_rate_hz", "geometry", "segmentation", "features",
                  "svm", "experiment", "synth"},
                 "top level");
  cfg.sample_rate_hz = j.value("sample_rate_hz", cfg.sample_rate_hz);

  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    reject_unknown(g,
                   {"n_rolling_elements", "ball_diameter_mm",
                    "pitch_diameter_mm", "contact_angle_deg"},
                   "geometry");
    auto& geo = cfg.geometry;
    geo.n_rolling_elements = g.value("n_rolling_elements", geo.n_rolling_elements);
    geo.ball_diameter_mm = g.value("ball_diameter_mm", geo.ball_diameter_mm);
    geo.pitch_diameter_mm = g.value("pitch_diameter_mm", geo.pitch_diameter_mm);
    geo.contact_angle_rad = g.value("contact_angle_deg", 0.0) *
                            std::numbers::pi / 180.0;
  }

  if (j.contains("segmentation")) {
    const json& s = j["segmentation"];
    reject_unknown(s, {"frame_seconds", "dismiss_rpm_range_fraction"},
                   "segmentation");
    cfg.segmentation.frame_seconds =
        s.value("frame_seconds", cfg.segmentation.frame_seconds);
    cfg.segmentation.dismiss_rpm_range_fraction = s.value(
        "dismiss_rpm_range_fraction",
        cfg.segmentation.dismiss_rpm_range_fraction);
  }

  if (j.contains("features")) {
    const json& f = j["features"];
    reject_unknown(
        f,
        {"window", "frame_ms", "hop_ms", "strict_short_nfft", "mel_filters",
         "mfcc_count", "mel_area_normalized", "log_floor",
         "median_aggregation", "spectral_kappa", "spectral_normalized_entropy",
         "env_slip_search", "time_absolute_peak", "ams_min_center_hz",
         "ams_max_mod_hz", "ams_second_window_frames", "ams_second_hop_frames",
         "ams_second_nfft"},
        "features");
    auto& fp = cfg.features;
    if (f.contains("window"))
      fp.window = window_from_string(f["window"].get<std::string>());
    fp.frame_ms = f.value("frame_ms", fp.frame_ms);
    fp.hop_ms = f.value("hop_ms", fp.hop_ms);
    fp.strict_short_nfft = f.value("strict_short_nfft", fp.strict_short_nfft);
    fp.mel_filters = f.value("mel_filters", fp.mel_filters);
    fp.mfcc_count = f.value("mfcc_count", fp.mfcc_count);
    fp.mel_area_normalized =
        f.value("mel_area_normalized", fp.mel_area_normalized);
    fp.log_floor = f.value("log_floor", fp.log_floor);
    fp.median_aggregation =
        f.value("median_aggregation", fp.median_aggregation);
    fp.spectral_kappa = f.value("spectral_kappa", fp.spectral_kappa);
    fp.spectral_normalized_entropy = f.value(
        "spectral_normalized_entropy", fp.spectral_normalized_entropy);
    fp.env_slip_search = f.value("env_slip_search", fp.env_slip_search);
    fp.time_absolute_peak =
        f.value("time_absolute_peak", fp.time_absolute_peak);
    fp.ams_min_center_hz = f.value("ams_min_center_hz", fp.ams_min_center_hz);
    fp.ams_max_mod_hz = f.value("ams_max_mod_hz", fp.ams_max_mod_hz);
    fp.ams_second_window_frames =
        f.value("ams_second_window_frames", fp.ams_second_window_frames);
    fp.ams_second_hop_frames =
        f.value("ams_second_hop_frames", fp.ams_second_hop_frames);
    fp.ams_second_nfft = f.value("ams_second_nfft", fp.ams_second_nfft);
  }

  if (j.contains("svm")) {
    const json& s = j["svm"];
    reject_unknown(
        s, {"kernel", "nu_grid", "gamma_grid", "tolerance", "max_pair_updates"},
        "svm");
    if (s.contains("kernel")) {
      const std::string k = s["kernel"].get<std::string>();
      if (k == "gaussian_squared")
        cfg.svm.kernel = ocsvm::KernelForm::gaussian_squared;
      else if (k == "gaussian_unsquared")
        cfg.svm.kernel = ocsvm::KernelForm::gaussian_unsquared;
      else
        throw DataError("config: unknown kernel '" + k + "'");
    }
    if (s.contains("nu_grid"))
      cfg.svm.nu_grid = s["nu_grid"].get<std::vector<double>>();
    if (s.contains("gamma_grid"))
      cfg.svm.gamma_grid = s["gamma_grid"].get<std::vector<double>>();
    cfg.svm.tolerance = s.value("tolerance", cfg.svm.tolerance);
    cfg.svm.max_pair_updates =
        s.value("max_pair_updates", cfg.svm.max_pair_updates);
  }

  if (j.contains("experiment")) {
    const json& e = j["experiment"];
    reject_unknown(e,
                   {"feature_set", "with_fr", "repetitions", "train_size",
                    "eval_size", "seed"},
                   "experiment");
    auto& ep = cfg.experiment;
    ep.feature_set = e.value("feature_set", ep.feature_set);
    ep.with_fr = e.value("with_fr", ep.with_fr);
    ep.repetitions = e.value("repetitions", ep.repetitions);
    ep.train_size = e.value("train_size", ep.train_size);
    ep.eval_size = e.value("eval_size", ep.eval_size);
    ep.seed = e.value("seed", ep.seed);
  }

  if (j.contains("synth")) {
    const json& s = j["synth"];
    reject_unknown(s,
                   {"seed", "record_seconds", "segments_healthy",
                    "segments_outer_race", "segments_distributed",
                    "resonance_hz", "severity_outer_min", "severity_outer_max",
                    "severity_distributed_min", "severity_distributed_max"},
                   "synth");
    auto& sp = cfg.synth;
    sp.seed = s.value("seed", sp.seed);
    sp.record_seconds = s.value("record_seconds", sp.record_seconds);
    sp.segments_healthy = s.value("segments_healthy", sp.segments_healthy);
    sp.segments_outer_race =
        s.value("segments_outer_race", sp.segments_outer_race);
    sp.segments_distributed =
        s.value("segments_distributed", sp.segments_distributed);
    sp.resonance_hz = s.value("resonance_hz", sp.resonance_hz);
    sp.severity_outer_min =
        s.value("severity_outer_min", sp.severity_outer_min);
    sp.severity_outer_max =
        s.value("severity_outer_max", sp.severity_outer_max);
    sp.severity_distributed_min =
        s.value("severity_distributed_min", sp.severity_distributed_min);
    sp.severity_distributed_max =
        s.value("severity_distributed_max", sp.severity_distributed_max);
  }

  return cfg;
}

ToolkitConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string default_config_json() {
  const ToolkitConfig d;
  json j;
  j["sample_rate_hz"] = d.sample_rate_hz;
  j["geometry"] = {{"n_rolling_elements", d.geometry.n_rolling_elements},
                   {"ball_diameter_mm", d.geometry.ball_diameter_mm},
                   {"pitch_diameter_mm", d.geometry.pitch_diameter_mm},
                   {"contact_angle_deg", 0.0}};
  j["segmentation"] = {
      {"frame_seconds", d.segmentation.frame_seconds},
      {"dismiss_rpm_range_fraction",
       d.segmentation.dismiss_rpm_range_fraction}};
  j["features"] = {{"window", "hann"},
                   {"frame_ms", d.features.frame_ms},
                   {"hop_ms", d.features.hop_ms},
                   {"strict_short_nfft", d.features.strict_short_nfft},
                   {"mel_filters", d.features.mel_filters},
                   {"mfcc_count", d.features.mfcc_count},
                   {"mel_area_normalized", d.features.mel_area_normalized},
                   {"log_floor", d.features.log_floor},
                   {"median_aggregation", d.features.median_aggregation},
                   {"spectral_kappa", d.features.spectral_kappa},
                   {"spectral_normalized_entropy",
                    d.features.spectral_normalized_entropy},
                   {"env_slip_search", d.features.env_slip_search},
                   {"time_absolute_peak", d.features.time_absolute_peak},
                   {"ams_min_center_hz", d.features.ams_min_center_hz},
                   {"ams_max_mod_hz", d.features.ams_max_mod_hz},
                   {"ams_second_window_frames",
                    d.features.ams_second_window_frames},
                   {"ams_second_hop_frames", d.features.ams_second_hop_frames},
                   {"ams_second_nfft", d.features.ams_second_nfft}};
  j["svm"] = {{"kernel", "gaussian_squared"},
              {"nu_grid", d.svm.nu_grid},
              {"gamma_grid", d.svm.gamma_grid},
              {"tolerance", d.svm.tolerance},
              {"max_pair_updates", d.svm.max_pair_updates}};
  j["experiment"] = {{"feature_set", d.experiment.feature_set},
                     {"with_fr", d.experiment.with_fr},
                     {"repetitions", d.experiment.repetitions},
                     {"train_size", d.experiment.train_size},
                     {"eval_size", d.experiment.eval_size},
                     {"seed", d.experiment.seed}};
  j["synth"] = {{"seed", d.synth.seed},
                {"record_seconds", d.synth.record_seconds},
                {"segments_healthy", d.synth.segments_healthy},
                {"segments_outer_race", d.synth.segments_outer_race},
                {"segments_distributed", d.synth.segments_distributed},
                {"resonance_hz", d.synth.resonance_hz},
                {"severity_outer_min", d.synth.severity_outer_min},
                {"severity_outer_max", d.synth.severity_outer_max},
                {"severity_distributed_min", d.synth.severity_distributed_min},
                {"severity_distributed_max",
                 d.synth.severity_distributed_max}};
  return j.dump(2);
}

}  // namespace vibrodiag::config

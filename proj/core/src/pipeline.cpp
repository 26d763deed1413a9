#include "vibrodiag/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "vibrodiag/ams.hpp"
#include "vibrodiag/envelope_features.hpp"
#include "vibrodiag/mel.hpp"
#include "vibrodiag/rng.hpp"
#include "vibrodiag/spectral_features.hpp"
#include "vibrodiag/time_features.hpp"

namespace vibrodiag::pipeline {

FeatureSetId feature_set_from_string(const std::string& s) {
  if (s == "TD") return FeatureSetId::TD;
  if (s == "SD") return FeatureSetId::SD;
  if (s == "ENV_AMP") return FeatureSetId::ENV_AMP;
  if (s == "AMS") return FeatureSetId::AMS;
  if (s == "MFCC") return FeatureSetId::MFCC;
  throw DataError("unknown feature set '" + s + "'");
}

std::string to_string(FeatureSetId id) {
  switch (id) {
    case FeatureSetId::TD: return "TD";
    case FeatureSetId::SD: return "SD";
    case FeatureSetId::ENV_AMP: return "ENV_AMP";
    case FeatureSetId::AMS: return "AMS";
    case FeatureSetId::MFCC: return "MFCC";
  }
  throw DataError("invalid feature set value");
}

SegmentationResult segment(const Signal& signal, const io::SpeedTrack& track,
                           const config::SegmentationParams& params,
                           eval::Label label, const std::string& source_id) {
  validate(signal);
  if (track.empty()) throw DataError("segment: empty speed track");
  if (track.front().first > 0.0)
    throw DataError("segment: speed track starts after the signal");

  const double fs = signal.sample_rate_hz;
  const std::size_t frame_len =
      static_cast<std::size_t>(std::llround(params.frame_seconds * fs));
  if (signal.samples.size() < frame_len)
    throw DataError("segment: signal shorter than one frame");

  SegmentationResult out;
  out.frame_len = frame_len;
  const std::size_t n_frames = signal.samples.size() / frame_len;
  std::size_t seg_index = 0;
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t begin = f * frame_len;
    const std::size_t end = begin + frame_len;
    const double t0 = static_cast<double>(begin) / fs;
    const double t1 = static_cast<double>(end) / fs;

    // zero-order hold: rpm is constant from each knot to the next
    double rpm_min = 0.0, rpm_max = 0.0, rpm_integral = 0.0;
    bool first = true;
    std::size_t k = 0;
    while (k + 1 < track.size() && track[k + 1].first <= t0) ++k;
    double t_cursor = t0;
    for (; t_cursor < t1; ++k) {
      const double piece_end =
          (k + 1 < track.size()) ? std::min(track[k + 1].first, t1) : t1;
      const double rpm = track[k].second;
      if (first) {
        rpm_min = rpm_max = rpm;
        first = false;
      } else {
        rpm_min = std::min(rpm_min, rpm);
        rpm_max = std::max(rpm_max, rpm);
      }
      rpm_integral += rpm * (piece_end - t_cursor);
      t_cursor = piece_end;
      if (k + 1 >= track.size()) break;
    }
    const double rpm_mean = rpm_integral / (t1 - t0);

    if (rpm_mean <= 0.0 ||
        (rpm_max - rpm_min) > params.dismiss_rpm_range_fraction * rpm_mean) {
      out.dismissed.push_back({begin, end});
      continue;
    }

    SegmentRecord rec;
    rec.segment.sample_rate_hz = fs;
    rec.segment.samples.assign(signal.samples.begin() + begin,
                               signal.samples.begin() + end);
    rec.rotational_freq_hz = rpm_mean / 60.0;
    rec.label = label;
    rec.source_id =
        source_id.empty() ? "seg" + std::to_string(seg_index)
                          : source_id + "#" + std::to_string(seg_index);
    ++seg_index;
    out.records.push_back(std::move(rec));
  }
  return out;
}

std::size_t base_dimension(FeatureSetId id, const config::FeatureParams& fp) {
  switch (id) {
    case FeatureSetId::TD: return 7;
    case FeatureSetId::SD: return 6;
    case FeatureSetId::ENV_AMP: return 4;
    case FeatureSetId::AMS: return 1;
    case FeatureSetId::MFCC: return fp.mfcc_count;
  }
  throw DataError("invalid feature set value");
}

std::vector<std::string> feature_names(FeatureSetId id, bool with_fr,
                                       const config::FeatureParams& fp) {
  std::vector<std::string> names;
  switch (id) {
    case FeatureSetId::TD:
      names = {"td_average",  "td_variance", "td_rms",         "td_kurtosis",
               "td_skewness", "td_amplitude_range", "td_peak_to_rms"};
      break;
    case FeatureSetId::SD:
      names = {"sd_centroid_hz", "sd_spread_hz", "sd_kurtosis",
               "sd_entropy",     "sd_crest",     "sd_rolloff_hz"};
      break;
    case FeatureSetId::ENV_AMP:
      names = {"env_amp_bpfo", "env_amp_bpfi", "env_amp_ca", "env_amp_re"};
      break;
    case FeatureSetId::AMS:
      names = {"ams_scalar"};
      break;
    case FeatureSetId::MFCC:
      for (std::size_t i = 1; i <= fp.mfcc_count; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "mfcc_%02zu", i);
        names.emplace_back(buf);
      }
      break;
  }
  if (with_fr) names.emplace_back("fr_hz");
  return names;
}

namespace {

std::vector<double> extract_one(const SegmentRecord& rec, FeatureSetId id,
                                const config::FeatureParams& fp,
                                const features::BearingGeometry& geometry,
                                const features::MelFilterbank* bank) {
  switch (id) {
    case FeatureSetId::TD: {
      features::TimeFeatureOptions opts;
      opts.absolute_peak = fp.time_absolute_peak;
      const auto f = features::extract_time_features(rec.segment, opts);
      return {f.average,  f.variance,        f.rms,        f.kurtosis,
              f.skewness, f.amplitude_range, f.peak_to_rms};
    }
    case FeatureSetId::SD: {
      features::SpectralOptions opts;
      opts.kappa = fp.spectral_kappa;
      opts.normalized_entropy = fp.spectral_normalized_entropy;
      const auto f = features::extract_spectral_features(rec.segment, opts);
      return {f.centroid_hz, f.spread_hz, f.kurtosis,
              f.entropy,     f.crest,     f.rolloff_hz};
    }
    case FeatureSetId::ENV_AMP: {
      const auto faults =
          features::fault_frequencies(geometry, rec.rotational_freq_hz);
      features::EnvAmpOptions opts;
      opts.slip_search = fp.env_slip_search;
      const auto f =
          features::envelope_fault_amplitudes(rec.segment, faults, opts);
      return {f.amp_bpfo, f.amp_bpfi, f.amp_ca, f.amp_re};
    }
    case FeatureSetId::AMS: {
      features::AmsOptions opts;
      opts.log_floor = fp.log_floor;
      opts.aggregation = fp.median_aggregation
                             ? features::AmsOptions::Aggregation::median
                             : features::AmsOptions::Aggregation::mean;
      const auto matrix = features::ams(
          rec.segment, fp.first_stft(rec.segment.sample_rate_hz),
          fp.second_stft(), opts);
      return {features::ams_scalar(matrix, fp.ams_min_center_hz,
                                   fp.ams_max_mod_hz)};
    }
    case FeatureSetId::MFCC: {
      const auto v = features::mfcc(
          rec.segment, *bank, fp.mfcc_config(rec.segment.sample_rate_hz));
      return v.coefficients;
    }
  }
  throw DataError("invalid feature set value");
}

void parallel_for(std::size_t count, unsigned n_threads,
                  const std::function<void(std::size_t)>& body) {
  unsigned hw = n_threads == 0 ? std::thread::hardware_concurrency() : n_threads;
  if (hw == 0) hw = 1;
  hw = std::min<std::size_t>(hw, count == 0 ? 1 : count);
  if (hw <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < hw; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<FeatureVector> extract(
    const std::vector<SegmentRecord>& records, FeatureSetId set_id,
    bool with_fr, const config::FeatureParams& fp,
    const features::BearingGeometry& geometry, unsigned n_threads) {
  features::MelFilterbank bank;
  if (set_id == FeatureSetId::MFCC && !records.empty()) {
    const auto first = fp.first_stft(records.front().segment.sample_rate_hz);
    bank = features::mel_filterbank(fp.mel_filters, first.dft_length,
                                    records.front().segment.sample_rate_hz);
  }

  std::vector<FeatureVector> out(records.size());
  parallel_for(records.size(), n_threads, [&](std::size_t i) {
    const SegmentRecord& rec = records[i];
    FeatureVector fv;
    fv.feature_set = set_id;
    fv.with_fr = with_fr;
    fv.label = rec.label;
    fv.source_id = rec.source_id;
    fv.rotational_freq_hz = rec.rotational_freq_hz;
    fv.values = extract_one(rec, set_id, fp, geometry,
                            set_id == FeatureSetId::MFCC ? &bank : nullptr);
    if (with_fr) fv.values.push_back(rec.rotational_freq_hz);
    out[i] = std::move(fv);
  });

  for (const auto& fv : out)
    for (double v : fv.values)
      if (!std::isfinite(v))
        throw DataError("extract: non-finite feature value in " +
                        fv.source_id);
  return out;
}

void write_feature_csv(const std::vector<FeatureVector>& features,
                       const config::FeatureParams& fp,
                       const std::string& path) {
  if (features.empty()) throw DataError("feature csv: nothing to write");
  std::ofstream out(path);
  if (!out) throw DataError("feature csv: cannot open " + path);
  const auto names =
      feature_names(features.front().feature_set, features.front().with_fr, fp);
  out << "source_id,label,f_r_hz";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (const auto& fv : features) {
    if (fv.values.size() != names.size())
      throw DataError("feature csv: inconsistent feature dimensions");
    out << fv.source_id << ',' << eval::to_string(fv.label) << ','
        << io::format_double(fv.rotational_freq_hz);
    for (double v : fv.values) out << ',' << io::format_double(v);
    out << '\n';
  }
  if (!out) throw DataError("feature csv: failed writing " + path);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

FeatureSetId set_from_column(const std::string& first_feature) {
  if (first_feature.rfind("td_", 0) == 0) return FeatureSetId::TD;
  if (first_feature.rfind("sd_", 0) == 0) return FeatureSetId::SD;
  if (first_feature.rfind("env_amp_", 0) == 0) return FeatureSetId::ENV_AMP;
  if (first_feature.rfind("ams_", 0) == 0) return FeatureSetId::AMS;
  if (first_feature.rfind("mfcc_", 0) == 0) return FeatureSetId::MFCC;
  throw DataError("feature csv: unrecognized feature column '" +
                  first_feature + "'");
}

double parse_num(const std::string& s, const std::string& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(path + ": cannot parse number '" + s + "'");
  }
}

}  // namespace

std::vector<FeatureVector> read_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("feature csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  const auto header = split_line(line);
  if (header.size() < 4 || header[0] != "source_id" || header[1] != "label" ||
      header[2] != "f_r_hz")
    throw DataError(path + ": unexpected feature csv header");

  const FeatureSetId set_id = set_from_column(header[3]);
  const bool with_fr = header.back() == "fr_hz";

  std::vector<FeatureVector> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      throw DataError(path + ": row width mismatch");
    FeatureVector fv;
    fv.feature_set = set_id;
    fv.with_fr = with_fr;
    fv.source_id = cells[0];
    fv.label = eval::label_from_string(cells[1]);
    fv.rotational_freq_hz = parse_num(cells[2], path);
    fv.values.reserve(cells.size() - 3);
    for (std::size_t i = 3; i < cells.size(); ++i)
      fv.values.push_back(parse_num(cells[i], path));
    out.push_back(std::move(fv));
  }
  if (out.empty()) throw DataError(path + ": no feature rows");
  return out;
}

void write_scores_csv(const std::vector<ScoreRow>& rows,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("scores csv: cannot open " + path);
  out << "source_id,label,score,predicted\n";
  for (const auto& r : rows)
    out << r.source_id << ',' << eval::to_string(r.label) << ','
        << io::format_double(r.value) << ',' << (r.is_inlier ? 'P' : 'N')
        << '\n';
}

std::vector<ScoreRow> read_scores_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("scores csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "source_id,label,score,predicted")
    throw DataError(path + ": unexpected scores header");
  std::vector<ScoreRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 4) throw DataError(path + ": malformed scores row");
    ScoreRow r;
    r.source_id = cells[0];
    r.label = eval::label_from_string(cells[1]);
    r.value = parse_num(cells[2], path);
    r.is_inlier = eval::label_from_string(cells[3]) == eval::Label::P;
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw DataError(path + ": no score rows");
  return rows;
}

ExperimentResult run_experiment(const std::vector<FeatureVector>& data,
                                const config::ExperimentParams& ep,
                                const config::SvmParams& svm) {
  if (ep.repetitions == 0) throw DataError("experiment: zero repetitions");
  std::vector<std::size_t> healthy, damaged;
  for (std::size_t i = 0; i < data.size(); ++i)
    (data[i].label == eval::Label::P ? healthy : damaged).push_back(i);

  const std::size_t draw = ep.train_size + ep.eval_size;
  if (healthy.size() < draw + 1)
    throw DataError("experiment: healthy pool smaller than train + eval");
  if (damaged.empty()) throw DataError("experiment: no damaged samples");

  const std::size_t dim = data.front().values.size();
  for (const auto& fv : data)
    if (fv.values.size() != dim)
      throw DataError("experiment: inconsistent feature dimensions");

  ExperimentResult result;
  double sum_tpr = 0.0, sum_tnr = 0.0, sum_acc = 0.0;

  for (std::size_t rep = 0; rep < ep.repetitions; ++rep) {
    Rng rng = Rng::stream(ep.seed, rep);

    // partial Fisher-Yates over a fresh copy of the healthy pool
    std::vector<std::size_t> pool = healthy;
    for (std::size_t i = 0; i < draw; ++i) {
      const std::size_t j = i + rng.below(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }

    Mat<double> train_set(ep.train_size, dim);
    Mat<double> eval_set(ep.eval_size, dim);
    for (std::size_t i = 0; i < ep.train_size; ++i)
      std::copy(data[pool[i]].values.begin(), data[pool[i]].values.end(),
                train_set.row(i));
    for (std::size_t i = 0; i < ep.eval_size; ++i)
      std::copy(data[pool[ep.train_size + i]].values.begin(),
                data[pool[ep.train_size + i]].values.end(), eval_set.row(i));

    const auto gs = ocsvm::grid_search(train_set, eval_set, svm.nu_grid,
                                       svm.gamma_grid, svm.train_options());
    const ocsvm::Model model =
        ocsvm::train(train_set, gs.best, svm.train_options());

    std::vector<eval::Label> truth, predicted;
    for (std::size_t i = draw; i < pool.size(); ++i) {
      truth.push_back(eval::Label::P);
      predicted.push_back(ocsvm::score(model, data[pool[i]].values).is_inlier
                              ? eval::Label::P
                              : eval::Label::N);
    }
    for (std::size_t idx : damaged) {
      truth.push_back(eval::Label::N);
      predicted.push_back(ocsvm::score(model, data[idx].values).is_inlier
                              ? eval::Label::P
                              : eval::Label::N);
    }

    RepetitionResult rr;
    rr.chosen = gs.best;
    rr.cm = eval::confusion(truth, predicted);
    rr.report = eval::report(rr.cm);
    sum_tpr += rr.report.tpr;
    sum_tnr += rr.report.tnr;
    sum_acc += rr.report.accuracy;
    result.repetitions.push_back(rr);
  }

  const double n = static_cast<double>(ep.repetitions);
  result.mean.tpr = sum_tpr / n;
  result.mean.tnr = sum_tnr / n;
  result.mean.fnr = 1.0 - result.mean.tpr;
  result.mean.fpr = 1.0 - result.mean.tnr;
  result.mean.ba = 0.5 * (result.mean.tpr + result.mean.tnr);
  result.mean.accuracy = sum_acc / n;
  return result;
}

std::vector<SweepRow> mfcc_sweep(const std::vector<SegmentRecord>& records,
                                 const std::vector<std::size_t>& counts,
                                 const config::ToolkitConfig& cfg,
                                 unsigned n_threads) {
  if (counts.empty()) throw DataError("sweep: no counts requested");
  std::size_t max_count = 0;
  for (std::size_t c : counts) {
    if (c == 0) throw DataError("sweep: MFCC count must be >= 1");
    max_count = std::max(max_count, c);
  }
  if (max_count > cfg.features.mel_filters)
    throw DataError("sweep: count exceeds the mel filter count");

  config::FeatureParams fp = cfg.features;
  fp.mfcc_count = max_count;
  const std::vector<FeatureVector> full =
      extract(records, FeatureSetId::MFCC, cfg.experiment.with_fr, fp,
              cfg.geometry, n_threads);

  std::vector<SweepRow> rows;
  for (std::size_t count : counts) {
    std::vector<FeatureVector> sliced = full;
    for (auto& fv : sliced) {
      std::vector<double> v(fv.values.begin(), fv.values.begin() + count);
      if (fv.with_fr) v.push_back(fv.rotational_freq_hz);
      fv.values = std::move(v);
    }
    const ExperimentResult res =
        run_experiment(sliced, cfg.experiment, cfg.svm);
    rows.push_back({count, res.mean.accuracy, res.mean.fpr, res.mean.fnr,
                    res.mean.ba});
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("sweep csv: cannot open " + path);
  out << "mfcc_count,accuracy,fpr,fnr,ba\n";
  for (const auto& r : rows)
    out << r.mfcc_count << ',' << io::format_double(r.accuracy) << ','
        << io::format_double(r.fpr) << ',' << io::format_double(r.fnr) << ','
        << io::format_double(r.ba) << '\n';
}

std::vector<SynthRecord> generate_dataset(
    const config::SynthParams& sp, const features::BearingGeometry& geometry,
    double sample_rate_hz, const config::SegmentationParams& seg) {
  const std::size_t segs_per_record = static_cast<std::size_t>(
      sp.record_seconds / seg.frame_seconds);
  if (segs_per_record == 0)
    throw DataError("synth dataset: record shorter than one frame");

  struct ClassSpec {
    synth::FaultKind kind;
    std::size_t target;
    double sev_min, sev_max;
  };
  const ClassSpec classes[] = {
      {synth::FaultKind::none, sp.segments_healthy, 0.0, 0.0},
      {synth::FaultKind::outer_race, sp.segments_outer_race,
       sp.severity_outer_min, sp.severity_outer_max},
      {synth::FaultKind::distributed, sp.segments_distributed,
       sp.severity_distributed_min, sp.severity_distributed_max},
  };

  std::vector<SynthRecord> out;
  std::uint64_t record_index = 0;
  for (const ClassSpec& cls : classes) {
    std::size_t produced = 0;
    while (produced < cls.target) {
      Rng rng = Rng::stream(sp.seed, record_index);
      const std::size_t want =
          std::min(segs_per_record, cls.target - produced);

      SynthRecord rec;
      rec.rpm = synth::paper_speed_levels_rpm()[rng.below(8)];
      rec.torque = synth::torque_levels()[rng.below(4)];
      rec.fault.kind = cls.kind;
      rec.fault.resonance_hz = sp.resonance_hz;
      rec.fault.severity = cls.kind == synth::FaultKind::none
                               ? 0.0
                               : rng.uniform(cls.sev_min, cls.sev_max);
      rec.source_id = synth::to_string(cls.kind) + "_r" +
                      std::to_string(record_index);

      synth::OperatingPoint op;
      op.rotational_speed_rpm = rec.rpm;
      op.torque_level = rec.torque;
      op.duration_s = static_cast<double>(want) * seg.frame_seconds;
      rec.signal = synth::generate(op, rec.fault, geometry,
                                   rng.next_u64(), sample_rate_hz);
      out.push_back(std::move(rec));
      produced += want;
      ++record_index;
    }
  }
  return out;
}

std::vector<SegmentRecord> segment_dataset(
    const std::vector<SynthRecord>& records,
    const config::SegmentationParams& seg) {
  std::vector<SegmentRecord> out;
  for (const auto& rec : records) {
    const io::SpeedTrack track{{0.0, rec.rpm}};
    const eval::Label label = rec.fault.kind == synth::FaultKind::none
                                  ? eval::Label::P
                                  : eval::Label::N;
    SegmentationResult sr =
        segment(rec.signal, track, seg, label, rec.source_id);
    for (auto& r : sr.records) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace vibrodiag::pipeline

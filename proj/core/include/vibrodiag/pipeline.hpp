#ifndef VIBRODIAG_PIPELINE_HPP
#define VIBRODIAG_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vibrodiag/config.hpp"
#include "vibrodiag/io.hpp"
#include "vibrodiag/metrics.hpp"
#include "vibrodiag/ocsvm.hpp"
#include "vibrodiag/synth.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag::pipeline {

enum class FeatureSetId { TD, SD, ENV_AMP, AMS, MFCC };

FeatureSetId feature_set_from_string(const std::string& s);
std::string to_string(FeatureSetId id);

/// One 2 s analysis frame with constant rotational speed.
struct SegmentRecord {
  Signal segment;
  double rotational_freq_hz = 0.0;
  eval::Label label = eval::Label::P;
  std::string source_id;
};

struct DismissedSpan {
  std::size_t begin = 0;  // sample indices
  std::size_t end = 0;
};

struct SegmentationResult {
  std::vector<SegmentRecord> records;
  std::vector<DismissedSpan> dismissed;
  std::size_t frame_len = 0;
};

/// Non-overlapping frames; a frame whose rpm range (zero-order-hold track)
/// exceeds the configured fraction of its mean is dismissed.
SegmentationResult segment(const Signal& signal, const io::SpeedTrack& track,
                           const config::SegmentationParams& params,
                           eval::Label label = eval::Label::P,
                           const std::string& source_id = "");

struct FeatureVector {
  FeatureSetId feature_set = FeatureSetId::TD;
  std::vector<double> values;  // fr appended as last entry when with_fr
  bool with_fr = false;
  eval::Label label = eval::Label::P;
  std::string source_id;
  double rotational_freq_hz = 0.0;
};

/// Dimension of a set without the optional fr component.
std::size_t base_dimension(FeatureSetId id, const config::FeatureParams& fp);

/// Column names matching values order (includes "fr_hz" when with_fr).
std::vector<std::string> feature_names(FeatureSetId id, bool with_fr,
                                       const config::FeatureParams& fp);

/// Extracts one feature set for every record. n_threads 0 uses the
/// hardware concurrency; results are ordered like the input regardless.
std::vector<FeatureVector> extract(
    const std::vector<SegmentRecord>& records, FeatureSetId set_id,
    bool with_fr, const config::FeatureParams& fp,
    const features::BearingGeometry& geometry, unsigned n_threads = 0);

/// Feature CSV: "source_id,label,f_r_hz,<feature columns>".
void write_feature_csv(const std::vector<FeatureVector>& features,
                       const config::FeatureParams& fp,
                       const std::string& path);
std::vector<FeatureVector> read_feature_csv(const std::string& path);

struct ScoreRow {
  std::string source_id;
  eval::Label label = eval::Label::P;
  double value = 0.0;
  bool is_inlier = false;
};

/// Scores CSV: "source_id,label,score,predicted".
void write_scores_csv(const std::vector<ScoreRow>& rows,
                      const std::string& path);
std::vector<ScoreRow> read_scores_csv(const std::string& path);

struct RepetitionResult {
  ocsvm::HyperParams chosen;
  eval::ConfusionMatrix cm;
  eval::EvalReport report;
};

struct ExperimentResult {
  std::vector<RepetitionResult> repetitions;
  eval::EvalReport mean;  // arithmetic mean of the per-repetition rates
};

/// The training/evaluation protocol: per repetition draw train and eval
/// sets from the healthy pool without replacement, grid-search, train,
/// score the held-out rest (remaining healthy plus all damaged).
ExperimentResult run_experiment(const std::vector<FeatureVector>& data,
                                const config::ExperimentParams& ep,
                                const config::SvmParams& svm);

struct SweepRow {
  std::size_t mfcc_count = 0;
  double accuracy = 0.0;
  double fpr = 0.0;
  double fnr = 0.0;
  double ba = 0.0;
};

/// One experiment per MFCC count. Cepstra are extracted once at the
/// largest requested count and sliced, which is exact because the
/// coefficients are independent of how many are kept.
std::vector<SweepRow> mfcc_sweep(const std::vector<SegmentRecord>& records,
                                 const std::vector<std::size_t>& counts,
                                 const config::ToolkitConfig& cfg,
                                 unsigned n_threads = 0);

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path);

/// One synthetic measurement record plus its metadata.
struct SynthRecord {
  Signal signal;
  double rpm = 0.0;
  synth::TorqueLevel torque = synth::TorqueLevel::pct0;
  synth::FaultSpec fault;
  std::string source_id;
};

/// Deterministic labeled dataset: speeds drawn from the eight levels,
/// torque from the four levels, severities from the configured ranges.
/// Produces exactly the configured number of 2 s segments per class once
/// segmented (the last record of a class may be shorter).
std::vector<SynthRecord> generate_dataset(
    const config::SynthParams& sp, const features::BearingGeometry& geometry,
    double sample_rate_hz, const config::SegmentationParams& seg);

/// Segments every record at constant speed (synthetic records have
/// constant-speed tracks by construction).
std::vector<SegmentRecord> segment_dataset(
    const std::vector<SynthRecord>& records,
    const config::SegmentationParams& seg);

}  // namespace vibrodiag::pipeline

#endif

// Command-line interface for the bearing-fault anomaly detection toolkit.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vibrodiag/config.hpp"
#include "vibrodiag/io.hpp"
#include "vibrodiag/metrics.hpp"
#include "vibrodiag/ocsvm.hpp"
#include "vibrodiag/pipeline.hpp"
#include "vibrodiag/synth.hpp"
#include "vibrodiag/types.hpp"

namespace fs = std::filesystem;
using namespace vibrodiag;

namespace {

config::ToolkitConfig load_or_default(const std::string& path) {
  if (path.empty()) return config::ToolkitConfig{};
  return config::load_config(path);
}

Signal read_signal_any(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".wav")
    return io::read_wav(path);
  return io::read_signal_csv(path);
}

std::vector<pipeline::SegmentRecord> segment_manifest(
    const std::string& manifest_path, const config::ToolkitConfig& cfg) {
  const auto entries = io::read_manifest(manifest_path);
  std::vector<pipeline::SegmentRecord> records;
  for (const auto& e : entries) {
    const Signal sig =
        read_signal_any(io::resolve_relative(manifest_path, e.signal_path));
    const io::SpeedTrack track = io::read_speed_track_csv(
        io::resolve_relative(manifest_path, e.speed_track_path));
    auto res =
        pipeline::segment(sig, track, cfg.segmentation, e.label, e.source_id);
    for (auto& r : res.records) records.push_back(std::move(r));
  }
  if (records.empty())
    throw DataError("no usable segments in " + manifest_path);
  return records;
}

/// Healthy-only view used for training and grid search; damaged rows never
/// reach the solver.
Mat<double> healthy_matrix(const std::vector<pipeline::FeatureVector>& rows,
                           std::size_t* skipped_damaged = nullptr) {
  std::size_t healthy = 0, damaged = 0;
  for (const auto& r : rows)
    (r.label == eval::Label::P ? healthy : damaged)++;
  if (healthy == 0) throw DataError("no healthy rows in the feature file");
  if (skipped_damaged) *skipped_damaged = damaged;

  const std::size_t dim = rows.front().values.size();
  Mat<double> m(healthy, dim);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.label != eval::Label::P) continue;
    if (r.values.size() != dim)
      throw DataError("inconsistent feature dimensions");
    std::copy(r.values.begin(), r.values.end(), m.row(i));
    ++i;
  }
  return m;
}

std::vector<std::size_t> parse_counts(const std::string& spec) {
  std::vector<std::size_t> counts;
  std::string token;
  std::istringstream ss(spec);
  while (std::getline(ss, token, ',')) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) {
      counts.push_back(std::stoul(token));
    } else {
      const std::size_t lo = std::stoul(token.substr(0, colon));
      const std::size_t hi = std::stoul(token.substr(colon + 1));
      if (hi < lo) throw DataError("counts range must be ascending");
      for (std::size_t c = lo; c <= hi; ++c) counts.push_back(c);
    }
  }
  if (counts.empty()) throw DataError("no MFCC counts given");
  return counts;
}

int cmd_synth(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = load_or_default(config_path);
  fs::create_directories(out_dir);
  const auto dataset = pipeline::generate_dataset(
      cfg.synth, cfg.geometry, cfg.sample_rate_hz, cfg.segmentation);

  std::vector<io::ManifestEntry> entries;
  for (const auto& rec : dataset) {
    const std::string wav = rec.source_id + ".wav";
    const std::string track = rec.source_id + "_track.csv";
    io::write_wav(rec.signal, (fs::path(out_dir) / wav).string());
    io::write_speed_track_csv({{0.0, rec.rpm}},
                              (fs::path(out_dir) / track).string());
    entries.push_back({rec.source_id, wav, track,
                       rec.fault.kind == synth::FaultKind::none
                           ? eval::Label::P
                           : eval::Label::N});
  }
  io::write_manifest(entries, (fs::path(out_dir) / "manifest.csv").string());
  std::printf("wrote %zu records to %s\n", dataset.size(), out_dir.c_str());
  return 0;
}

int cmd_extract(const std::string& config_path, const std::string& manifest,
                const std::string& set_name, bool with_fr,
                const std::string& out, unsigned threads) {
  const auto cfg = load_or_default(config_path);
  const auto records = segment_manifest(manifest, cfg);
  const auto features = pipeline::extract(
      records, pipeline::feature_set_from_string(set_name), with_fr,
      cfg.features, cfg.geometry, threads);
  pipeline::write_feature_csv(features, cfg.features, out);
  std::printf("extracted %s for %zu segments -> %s\n", set_name.c_str(),
              features.size(), out.c_str());
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& features_path,
              double nu, double gamma, const std::string& out) {
  const auto cfg = load_or_default(config_path);
  const auto rows = pipeline::read_feature_csv(features_path);
  std::size_t damaged = 0;
  const Mat<double> train_set = healthy_matrix(rows, &damaged);
  if (damaged > 0)
    std::fprintf(stderr, "note: %zu damaged rows excluded from training\n",
                 damaged);
  ocsvm::Model model =
      ocsvm::train(train_set, {nu, gamma}, cfg.svm.train_options());
  model.feature_set_id = pipeline::to_string(rows.front().feature_set);
  ocsvm::save_model(model, out);
  std::printf("trained on %zu healthy rows (%zu support vectors) -> %s\n",
              train_set.rows, model.support_vectors.rows, out.c_str());
  return 0;
}

int cmd_gridsearch(const std::string& config_path,
                   const std::string& train_path, const std::string& eval_path,
                   const std::string& out) {
  const auto cfg = load_or_default(config_path);
  const auto train_rows = pipeline::read_feature_csv(train_path);
  const auto eval_rows = pipeline::read_feature_csv(eval_path);
  const Mat<double> train_set = healthy_matrix(train_rows);
  const Mat<double> eval_set = healthy_matrix(eval_rows);
  const auto res =
      ocsvm::grid_search(train_set, eval_set, cfg.svm.nu_grid,
                         cfg.svm.gamma_grid, cfg.svm.train_options());
  std::printf("best nu=%s gamma=%s eval_inlier_rate=%.4f\n",
              io::format_double(res.best.nu).c_str(),
              io::format_double(res.best.gamma).c_str(),
              res.best_inlier_rate);
  if (!out.empty()) {
    nlohmann::json j{{"nu", res.best.nu},
                     {"gamma", res.best.gamma},
                     {"eval_inlier_rate", res.best_inlier_rate}};
    std::ofstream file(out);
    if (!file) throw DataError("cannot open " + out);
    file << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_classify(const std::string& model_path,
                 const std::string& features_path, const std::string& out) {
  const ocsvm::Model model = ocsvm::load_model(model_path);
  const auto rows = pipeline::read_feature_csv(features_path);
  std::vector<pipeline::ScoreRow> scores;
  scores.reserve(rows.size());
  for (const auto& r : rows) {
    const auto s = ocsvm::score(model, r.values);
    scores.push_back({r.source_id, r.label, s.value, s.is_inlier});
  }
  pipeline::write_scores_csv(scores, out);
  std::printf("scored %zu rows -> %s\n", scores.size(), out.c_str());
  return 0;
}

int cmd_evaluate(const std::string& scores_path, const std::string& csv_out) {
  const auto rows = pipeline::read_scores_csv(scores_path);
  std::vector<eval::Label> truth, predicted;
  for (const auto& r : rows) {
    truth.push_back(r.label);
    predicted.push_back(r.is_inlier ? eval::Label::P : eval::Label::N);
  }
  const auto cm = eval::confusion(truth, predicted);
  const auto rep = eval::report(cm);
  std::fputs(eval::format_report(cm, rep).c_str(), stdout);
  if (!csv_out.empty()) {
    std::ofstream file(csv_out);
    if (!file) throw DataError("cannot open " + csv_out);
    file << eval::report_csv(rep);
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& manifest,
              const std::string& counts_spec, const std::string& out,
              unsigned threads) {
  const auto cfg = load_or_default(config_path);
  const auto records = segment_manifest(manifest, cfg);
  const auto rows =
      pipeline::mfcc_sweep(records, parse_counts(counts_spec), cfg, threads);
  pipeline::write_sweep_csv(rows, out);
  std::printf("swept %zu MFCC counts -> %s\n", rows.size(), out.c_str());
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& manifest,
            const std::string& out_dir, unsigned threads) {
  const auto cfg = load_or_default(config_path);
  fs::create_directories(out_dir);
  const auto records = segment_manifest(manifest, cfg);
  const auto features = pipeline::extract(
      records, pipeline::feature_set_from_string(cfg.experiment.feature_set),
      cfg.experiment.with_fr, cfg.features, cfg.geometry, threads);
  const auto result =
      pipeline::run_experiment(features, cfg.experiment, cfg.svm);

  std::ofstream reps((fs::path(out_dir) / "repetitions.csv").string());
  if (!reps) throw DataError("cannot write repetition report");
  reps << "repetition,nu,gamma,tp,fn,fp,tn,tpr,tnr,fpr,fnr,ba,accuracy\n";
  for (std::size_t r = 0; r < result.repetitions.size(); ++r) {
    const auto& rr = result.repetitions[r];
    reps << r << ',' << io::format_double(rr.chosen.nu) << ','
         << io::format_double(rr.chosen.gamma) << ',' << rr.cm.tp << ','
         << rr.cm.fn << ',' << rr.cm.fp << ',' << rr.cm.tn << ','
         << io::format_double(rr.report.tpr) << ','
         << io::format_double(rr.report.tnr) << ','
         << io::format_double(rr.report.fpr) << ','
         << io::format_double(rr.report.fnr) << ','
         << io::format_double(rr.report.ba) << ','
         << io::format_double(rr.report.accuracy) << '\n';
  }
  std::ofstream mean((fs::path(out_dir) / "mean_report.csv").string());
  mean << eval::report_csv(result.mean);

  std::printf("%s%s mean over %zu repetitions:\n",
              cfg.experiment.feature_set.c_str(),
              cfg.experiment.with_fr ? "+fr" : "",
              result.repetitions.size());
  std::printf("  TPR %.4f  TNR %.4f  BA %.4f\n", result.mean.tpr,
              result.mean.tnr, result.mean.ba);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bearing-fault anomaly detection toolkit"};
  app.require_subcommand(1);

  std::string config_path, out, manifest, set_name = "MFCC";
  std::string model_path, features_path, train_path, eval_path, scores_path;
  std::string counts = "1:13", csv_out;
  bool with_fr = false;
  unsigned threads = 0;
  double nu = 0.1, gamma = 0.5;

  auto* synth = app.add_subcommand("synth", "emit a labeled synthetic dataset");
  synth->add_option("--config", config_path, "toolkit config JSON");
  synth->add_option("--out", out, "output directory")->required();

  auto* extract = app.add_subcommand("extract", "signals to feature CSV");
  extract->add_option("--config", config_path, "toolkit config JSON");
  extract->add_option("--manifest", manifest, "dataset manifest")->required();
  extract->add_option("--set", set_name, "TD|SD|ENV_AMP|AMS|MFCC");
  extract->add_flag("--with-fr", with_fr, "append rotational frequency");
  extract->add_option("--threads", threads, "worker threads (0 = auto)");
  extract->add_option("--out", out, "output CSV")->required();

  auto* train = app.add_subcommand("train", "features to model file");
  train->add_option("--config", config_path, "toolkit config JSON");
  train->add_option("--features", features_path, "feature CSV")->required();
  train->add_option("--nu", nu, "slack trade-off in (0,1]");
  train->add_option("--gamma", gamma, "kernel width");
  train->add_option("--out", out, "model JSON path")->required();

  auto* grid = app.add_subcommand("gridsearch", "pick nu/gamma on eval data");
  grid->add_option("--config", config_path, "toolkit config JSON");
  grid->add_option("--train-features", train_path, "healthy feature CSV")
      ->required();
  grid->add_option("--eval-features", eval_path, "healthy feature CSV")
      ->required();
  grid->add_option("--out", out, "write chosen parameters as JSON");

  auto* classify = app.add_subcommand("classify", "score features");
  classify->add_option("--model", model_path, "model JSON")->required();
  classify->add_option("--features", features_path, "feature CSV")->required();
  classify->add_option("--out", out, "scores CSV")->required();

  auto* evaluate = app.add_subcommand("evaluate", "scores to report");
  evaluate->add_option("--scores", scores_path, "scores CSV")->required();
  evaluate->add_option("--csv", csv_out, "also write the report as CSV");

  auto* sweep = app.add_subcommand("sweep", "MFCC-count sweep table");
  sweep->add_option("--config", config_path, "toolkit config JSON");
  sweep->add_option("--manifest", manifest, "dataset manifest")->required();
  sweep->add_option("--counts", counts, "e.g. 1:13 or 1,5,13");
  sweep->add_option("--threads", threads, "worker threads (0 = auto)");
  sweep->add_option("--out", out, "output CSV")->required();

  auto* run = app.add_subcommand("run", "full training/evaluation protocol");
  run->add_option("--config", config_path, "toolkit config JSON");
  run->add_option("--manifest", manifest, "dataset manifest")->required();
  run->add_option("--threads", threads, "worker threads (0 = auto)");
  run->add_option("--out-dir", out, "report directory")->required();

  auto* defaults = app.add_subcommand("config", "print the default config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) return cmd_synth(config_path, out);
    if (extract->parsed())
      return cmd_extract(config_path, manifest, set_name, with_fr, out,
                         threads);
    if (train->parsed())
      return cmd_train(config_path, features_path, nu, gamma, out);
    if (grid->parsed())
      return cmd_gridsearch(config_path, train_path, eval_path, out);
    if (classify->parsed())
      return cmd_classify(model_path, features_path, out);
    if (evaluate->parsed()) return cmd_evaluate(scores_path, csv_out);
    if (sweep->parsed())
      return cmd_sweep(config_path, manifest, counts, out, threads);
    if (run->parsed()) return cmd_run(config_path, manifest, out, threads);
    if (defaults->parsed()) {
      std::printf("%s\n", config::default_config_json().c_str());
      return 0;
    }
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}

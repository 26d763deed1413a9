#ifndef VIBRODIAG_IO_HPP
#define VIBRODIAG_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "vibrodiag/metrics.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag::io {

/// Mono 32-bit float WAV (format tag 3). Reading also accepts 16-bit PCM.
void write_wav(const Signal& signal, const std::string& path);
Signal read_wav(const std::string& path);

/// Signal CSV: first line "# sample_rate_hz=<value>", then one sample per
/// line.
void write_signal_csv(const Signal& signal, const std::string& path);
Signal read_signal_csv(const std::string& path);

/// Speed track CSV with header "time_s,rpm"; interpreted as a zero-order
/// hold from each knot.
using SpeedTrack = std::vector<std::pair<double, double>>;
void write_speed_track_csv(const SpeedTrack& track, const std::string& path);
SpeedTrack read_speed_track_csv(const std::string& path);

/// One dataset record on disk.
struct ManifestEntry {
  std::string source_id;
  std::string signal_path;       // .wav or .csv, relative to the manifest
  std::string speed_track_path;  // relative to the manifest
  eval::Label label = eval::Label::P;
};

/// Manifest CSV with header "source_id,signal,speed_track,label".
void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::string& path);
std::vector<ManifestEntry> read_manifest(const std::string& path);

/// Resolves a manifest-relative path against the manifest location.
std::string resolve_relative(const std::string& manifest_path,
                             const std::string& entry_path);

/// Shortest double representation that round-trips exactly.
std::string format_double(double value);

}  // namespace vibrodiag::io

#endif

#include "vibrodiag/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vibrodiag::io {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
               static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

void put_u16(std::ostream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::vector<unsigned char> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(context + ": cannot parse number '" + s + "'");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw DataError("format_double failed");
  return std::string(buf, end);
}

void write_wav(const Signal& signal, const std::string& path) {
  validate(signal);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");

  const std::uint32_t n = static_cast<std::uint32_t>(signal.samples.size());
  const std::uint32_t data_bytes = n * 4;
  const std::uint32_t rate =
      static_cast<std::uint32_t>(std::llround(signal.sample_rate_hz));

  out.write("RIFF", 4);
  put_u32(out, 4 + (8 + 16) + (8 + 4) + (8 + data_bytes));
  out.write("WAVE", 4);

  out.write("fmt ", 4);
  put_u32(out, 16);
  put_u16(out, 3);  // IEEE float
  put_u16(out, 1);  // mono
  put_u32(out, rate);
  put_u32(out, rate * 4);
  put_u16(out, 4);
  put_u16(out, 32);

  out.write("fact", 4);
  put_u32(out, 4);
  put_u32(out, n);

  out.write("data", 4);
  put_u32(out, data_bytes);
  for (double v : signal.samples) {
    const float f = static_cast<float>(v);
    char b[4];
    std::memcpy(b, &f, 4);
    out.write(b, 4);
  }
  if (!out) throw DataError("failed writing " + path);
}

Signal read_wav(const std::string& path) {
  const std::vector<unsigned char> bytes = read_all(path);
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw DataError(path + ": not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::uint32_t data_len = 0;

  std::size_t off = 12;
  while (off + 8 <= bytes.size()) {
    const std::uint32_t chunk_len = get_u32(bytes.data() + off + 4);
    const unsigned char* body = bytes.data() + off + 8;
    if (off + 8 + chunk_len > bytes.size())
      throw DataError(path + ": truncated chunk");
    if (std::memcmp(bytes.data() + off, "fmt ", 4) == 0 && chunk_len >= 16) {
      format = get_u16(body);
      channels = get_u16(body + 2);
      rate = get_u32(body + 4);
      bits = get_u16(body + 14);
    } else if (std::memcmp(bytes.data() + off, "data", 4) == 0) {
      data = body;
      data_len = chunk_len;
    }
    off += 8 + chunk_len + (chunk_len & 1);
  }
  if (data == nullptr) throw DataError(path + ": missing data chunk");
  if (channels != 1) throw DataError(path + ": only mono is supported");

  Signal s;
  s.sample_rate_hz = static_cast<double>(rate);
  if (format == 3 && bits == 32) {
    const std::uint32_t n = data_len / 4;
    s.samples.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      float f;
      std::memcpy(&f, data + 4 * i, 4);
      s.samples[i] = static_cast<double>(f);
    }
  } else if (format == 1 && bits == 16) {
    const std::uint32_t n = data_len / 2;
    s.samples.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::int16_t v = static_cast<std::int16_t>(
          data[2 * i] | (data[2 * i + 1] << 8));
      s.samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else {
    throw DataError(path + ": unsupported WAV encoding");
  }
  validate(s);
  return s;
}

void write_signal_csv(const Signal& signal, const std::string& path) {
  validate(signal);
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << "# sample_rate_hz=" << format_double(signal.sample_rate_hz) << '\n';
  for (double v : signal.samples) out << format_double(v) << '\n';
  if (!out) throw DataError("failed writing " + path);
}

Signal read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  const std::string prefix = "# sample_rate_hz=";
  if (line.rfind(prefix, 0) != 0)
    throw DataError(path + ": missing sample_rate_hz header");
  Signal s;
  s.sample_rate_hz = parse_double(line.substr(prefix.size()), path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    s.samples.push_back(parse_double(line, path));
  }
  validate(s);
  return s;
}

void write_speed_track_csv(const SpeedTrack& track, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << "time_s,rpm\n";
  for (const auto& [t, rpm] : track)
    out << format_double(t) << ',' << format_double(rpm) << '\n';
}

SpeedTrack read_speed_track_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "time_s,rpm")
    throw DataError(path + ": expected 'time_s,rpm' header");
  SpeedTrack track;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2) throw DataError(path + ": malformed row");
    track.emplace_back(parse_double(cells[0], path),
                       parse_double(cells[1], path));
  }
  if (track.empty()) throw DataError(path + ": empty speed track");
  for (std::size_t i = 1; i < track.size(); ++i)
    if (!(track[i].first > track[i - 1].first))
      throw DataError(path + ": track times must increase");
  return track;
}

void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << "source_id,signal,speed_track,label\n";
  for (const auto& e : entries)
    out << e.source_id << ',' << e.signal_path << ',' << e.speed_track_path
        << ',' << eval::to_string(e.label) << '\n';
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "source_id,signal,speed_track,label")
    throw DataError(path + ": unexpected manifest header");
  std::vector<ManifestEntry> entries;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) throw DataError(path + ": malformed manifest row");
    entries.push_back({cells[0], cells[1], cells[2],
                       eval::label_from_string(cells[3])});
  }
  if (entries.empty()) throw DataError(path + ": empty manifest");
  return entries;
}

std::string resolve_relative(const std::string& manifest_path,
                             const std::string& entry_path) {
  const std::filesystem::path entry(entry_path);
  if (entry.is_absolute()) return entry_path;
  return (std::filesystem::path(manifest_path).parent_path() / entry).string();
}

}  // namespace vibrodiag::io

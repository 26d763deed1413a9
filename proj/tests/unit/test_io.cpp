#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "vibrodiag/io.hpp"
#include "vibrodiag/rng.hpp"

using namespace vibrodiag;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("vibrodiag_test_" + std::to_string(Rng(std::random_device{}()).next_u64() % 1000000));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("wav round trip keeps float32-quantized samples") {
  TempDir dir;
  Rng rng(71);
  Signal s;
  s.sample_rate_hz = 51200.0;
  s.samples.resize(4096);
  for (double& v : s.samples) v = rng.gaussian();

  io::write_wav(s, dir.file("a.wav"));
  const Signal back = io::read_wav(dir.file("a.wav"));
  REQUIRE(back.samples.size() == s.samples.size());
  CHECK(back.sample_rate_hz == s.sample_rate_hz);
  for (std::size_t i = 0; i < s.samples.size(); ++i)
    CHECK(back.samples[i] ==
          static_cast<double>(static_cast<float>(s.samples[i])));

  // a second trip is lossless
  io::write_wav(back, dir.file("b.wav"));
  const Signal again = io::read_wav(dir.file("b.wav"));
  CHECK(again.samples == back.samples);
}

TEST_CASE("signal csv round trip is exact") {
  TempDir dir;
  Rng rng(72);
  Signal s;
  s.sample_rate_hz = 48000.0;
  s.samples.resize(257);
  for (double& v : s.samples) v = rng.gaussian() * 1e-3;
  io::write_signal_csv(s, dir.file("sig.csv"));
  const Signal back = io::read_signal_csv(dir.file("sig.csv"));
  CHECK(back.sample_rate_hz == s.sample_rate_hz);
  CHECK(back.samples == s.samples);
}

TEST_CASE("speed track and manifest round trips") {
  TempDir dir;
  const io::SpeedTrack track{{0.0, 500.0}, {5.0, 1500.0}, {9.5, 2000.0}};
  io::write_speed_track_csv(track, dir.file("track.csv"));
  CHECK(io::read_speed_track_csv(dir.file("track.csv")) == track);

  const std::vector<io::ManifestEntry> entries{
      {"rec0", "rec0.wav", "rec0_track.csv", eval::Label::P},
      {"rec1", "rec1.wav", "rec1_track.csv", eval::Label::N},
  };
  io::write_manifest(entries, dir.file("manifest.csv"));
  const auto back = io::read_manifest(dir.file("manifest.csv"));
  REQUIRE(back.size() == 2);
  CHECK(back[0].source_id == "rec0");
  CHECK(back[1].label == eval::Label::N);
  CHECK(io::resolve_relative(dir.file("manifest.csv"), "rec0.wav") ==
        dir.file("rec0.wav"));
}

TEST_CASE("malformed files raise DataError") {
  TempDir dir;
  {
    std::ofstream out(dir.file("bad.csv"));
    out << "no header here\n1.0\n";
  }
  CHECK_THROWS_AS(io::read_signal_csv(dir.file("bad.csv")), DataError);
  {
    std::ofstream out(dir.file("bad_track.csv"));
    out << "time_s,rpm\n1.0,500\n0.5,600\n";  // non-increasing time
  }
  CHECK_THROWS_AS(io::read_speed_track_csv(dir.file("bad_track.csv")),
                  DataError);
  {
    std::ofstream out(dir.file("bad.wav"));
    out << "RIFFxxxx";
  }
  CHECK_THROWS_AS(io::read_wav(dir.file("bad.wav")), DataError);
  CHECK_THROWS_AS(io::read_wav(dir.file("missing.wav")), DataError);
}

TEST_CASE("format_double round trips doubles exactly") {
  Rng rng(73);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.gaussian() * std::pow(10.0, (int)rng.below(30) - 15));
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

#ifndef VIBRODIAG_SYNTH_HPP
#define VIBRODIAG_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "vibrodiag/envelope_features.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag::synth {

enum class TorqueLevel : int { pct0 = 0, pct33 = 33, pct66 = 66, pct100 = 100 };

struct OperatingPoint {
  double rotational_speed_rpm = 1500.0;  // 500..3500
  TorqueLevel torque_level = TorqueLevel::pct33;
  double duration_s = 2.0;
};

enum class FaultKind {
  none,
  outer_race,
  inner_race,
  cage,
  rolling_element,
  distributed,
};

FaultKind fault_kind_from_string(const std::string& s);
std::string to_string(FaultKind kind);

struct FaultSpec {
  FaultKind kind = FaultKind::none;
  double severity = 0.0;        // 0..1; 0 iff kind == none
  double resonance_hz = 21000.0;
};

/// Labeled synthetic bearing vibration: shaft harmonics, torque- and
/// speed-scaled broadband noise, converter carriers with weak sidebands,
/// slowly wandering structural resonances, sparse environmental impacts,
/// and (when faulty) a jittered impulse train ringing a family of
/// high-frequency modes around resonance_hz. Deterministic per seed.
Signal generate(const OperatingPoint& op, const FaultSpec& fault,
                const features::BearingGeometry& geometry, std::uint64_t seed,
                double sample_rate_hz = 51200.0);

inline const std::vector<double>& paper_speed_levels_rpm() {
  static const std::vector<double> levels{500, 750, 1000, 1500,
                                          2000, 2500, 3000, 3500};
  return levels;
}

inline const std::vector<TorqueLevel>& torque_levels() {
  static const std::vector<TorqueLevel> levels{
      TorqueLevel::pct0, TorqueLevel::pct33, TorqueLevel::pct66,
      TorqueLevel::pct100};
  return levels;
}

}  // namespace vibrodiag::synth

#endif

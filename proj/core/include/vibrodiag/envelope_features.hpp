#ifndef VIBRODIAG_ENVELOPE_FEATURES_HPP
#define VIBRODIAG_ENVELOPE_FEATURES_HPP

#include "vibrodiag/types.hpp"

namespace vibrodiag::features {

/// Rolling-element bearing geometry for the kinematic fault frequencies.
struct BearingGeometry {
  int n_rolling_elements = 8;
  double ball_diameter_mm = 12.0;
  double pitch_diameter_mm = 60.0;
  double contact_angle_rad = 0.0;
};

/// Characteristic fault frequencies in Hz for a given shaft speed.
struct FaultFrequencies {
  double bpfo_hz = 0.0;  // outer race
  double bpfi_hz = 0.0;  // inner race
  double ca_hz = 0.0;    // cage (FTF)
  double re_hz = 0.0;    // rolling element (BSF)
};

/// Envelope-spectrum amplitude sums over the first three harmonics of each
/// fault frequency (feature set "ENV-AMP").
struct EnvAmpFeatures {
  double amp_bpfo = 0.0;
  double amp_bpfi = 0.0;
  double amp_ca = 0.0;
  double amp_re = 0.0;
};

struct EnvAmpOptions {
  /// Search +-2 bins around each harmonic and take the maximum, to
  /// compensate bearing slip. Off keeps the deterministic nearest bin.
  bool slip_search = false;
};

/// Standard kinematics:
///   BPFO = (n/2) f_r (1 - (d/D) cos phi)
///   BPFI = (n/2) f_r (1 + (d/D) cos phi)
///   CA   = (f_r/2) (1 - (d/D) cos phi)
///   RE   = (D/2d) f_r (1 - ((d/D) cos phi)^2)
FaultFrequencies fault_frequencies(const BearingGeometry& geometry,
                                   double rotational_freq_hz);

/// Magnitude spectrum of the mean-removed analytic envelope, zero-padded to
/// the next power of two. Returned bins are one-sided; spacing is
/// sample_rate / padded length.
struct EnvelopeSpectrum {
  std::vector<double> magnitudes;
  double bin_spacing_hz = 0.0;
};
EnvelopeSpectrum envelope_spectrum(const Signal& segment);

/// Nearest spectrum bin for a frequency, ties resolved to the lower bin.
std::size_t nearest_bin(double freq_hz, double bin_spacing_hz);

/// Sum of envelope-spectrum magnitudes at harmonics i*f for i = 1..3 of each
/// fault frequency. Throws when a harmonic falls outside the spectrum.
EnvAmpFeatures envelope_fault_amplitudes(const Signal& segment,
                                         const FaultFrequencies& faults,
                                         const EnvAmpOptions& opts = {});

}  // namespace vibrodiag::features

#endif

#pragma once

#include <cstdint>

namespace cfmimo {

enum class ApLayout { kGrid, kUniformRandom };

// Scenario parameters for one simulated network.
//
// Defaults follow a 3GPP Urban Microcell setup: log-distance pathloss
// -30.5 - 36.7 log10(d) dB with 4 dB lognormal shadowing, 10 m AP/UE
// height difference, 100 mW uplink power, -94 dBm noise over 20 MHz,
// half-wavelength ULA spacing.
struct NetworkConfig {
  int ap_count = 100;        // L
  int ue_count = 40;         // K
  int antennas_per_ap = 4;   // N
  int pilot_length = 10;     // symbols per coherence block spent on pilots
  int coherence_block = 200; // coherence block length in symbols
  double area_side = 2000.0; // side of the square service area, meters
  ApLayout ap_layout = ApLayout::kUniformRandom;
  double uplink_power = 0.1; // watts per UE
  double noise_power = 3.9810717055349565e-13;  // watts (-94 dBm)
  double asd_deg = 15.0;         // angular standard deviation, degrees
  double antenna_spacing = 0.5;  // fraction of the carrier wavelength
  double ap_height_delta = 10.0; // AP/UE height difference, meters
  double shadow_std_db = 4.0;
  double pathloss_const_db = -30.5;
  double pathloss_slope_db = 36.7;  // dB per decade of distance
  std::uint64_t seed = 1;
  int n_setups = 50;        // independent UE placements
  int n_realizations = 300; // channel realizations per setup

  // Throws std::invalid_argument on the first violated constraint.
  void validate() const;
};

}  // namespace cfmimo

#include "cfmimo/config.hpp"

#include <stdexcept>
#include <string>

namespace cfmimo {

namespace {
void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("NetworkConfig: " + what);
}
}  // namespace

void NetworkConfig::validate() const {
  require(ap_count >= 1, "ap_count must be >= 1");
  require(ue_count >= 1, "ue_count must be >= 1");
  require(antennas_per_ap >= 1, "antennas_per_ap must be >= 1");
  require(pilot_length >= 1, "pilot_length must be >= 1");
  require(pilot_length < coherence_block,
          "pilot_length must be < coherence_block");
  require(area_side > 0.0, "area_side must be > 0");
  require(uplink_power > 0.0, "uplink_power must be > 0");
  require(noise_power > 0.0, "noise_power must be > 0");
  require(asd_deg >= 0.0, "asd_deg must be >= 0");
  require(antenna_spacing > 0.0, "antenna_spacing must be > 0");
  require(ap_height_delta >= 0.0, "ap_height_delta must be >= 0");
  require(shadow_std_db >= 0.0, "shadow_std_db must be >= 0");
  require(n_setups >= 1, "n_setups must be >= 1");
  require(n_realizations >= 1, "n_realizations must be >= 1");
}

}  // namespace cfmimo

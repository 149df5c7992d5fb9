#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/covariance.hpp"

namespace cfmimo {

// One coherence block of correlated Rayleigh channels. Stored per AP as
// an N x K matrix whose column k is the channel from UE k to that AP.
struct ChannelRealization {
  std::vector<Eigen::MatrixXcd> per_ap;  // L entries, each N x K

  int ap_count() const { return static_cast<int>(per_ap.size()); }
  int ue_count() const {
    return per_ap.empty() ? 0 : static_cast<int>(per_ap.front().cols());
  }
  int antennas() const {
    return per_ap.empty() ? 0 : static_cast<int>(per_ap.front().rows());
  }

  Eigen::MatrixXcd::ConstColXpr h(int k, int l) const {
    return per_ap[l].col(k);
  }

  // Collective channel of UE k across all APs, [h_k0; h_k1; ...], LN x 1.
  Eigen::VectorXcd stacked_ue(int k) const;
};

// h_kl = F_kl z with z standard circularly-symmetric complex Gaussian,
// independent across pairs. Draw order is UE-major then AP, so a fixed
// engine state reproduces the realization bit for bit.
ChannelRealization sample_channels(const CovarianceSet& cov,
                                   std::mt19937_64& eng);

}  // namespace cfmimo

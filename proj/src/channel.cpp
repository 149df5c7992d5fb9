#include "cfmimo/channel.hpp"

#include "cfmimo/rng.hpp"

namespace cfmimo {

Eigen::VectorXcd ChannelRealization::stacked_ue(int k) const {
  const int n = antennas();
  Eigen::VectorXcd out(static_cast<Eigen::Index>(n) * ap_count());
  for (int l = 0; l < ap_count(); ++l) {
    out.segment(static_cast<Eigen::Index>(l) * n, n) = per_ap[l].col(k);
  }
  return out;
}

ChannelRealization sample_channels(const CovarianceSet& cov,
                                   std::mt19937_64& eng) {
  const int ue_count = cov.ue_count();
  const int ap_count = cov.ap_count();
  const int antennas = cov.antennas();

  ChannelRealization real;
  real.per_ap.assign(ap_count, Eigen::MatrixXcd(antennas, ue_count));

  Eigen::VectorXcd z(antennas);
  for (int k = 0; k < ue_count; ++k) {
    for (int l = 0; l < ap_count; ++l) {
      sample_cscg(z, eng);
      real.per_ap[l].col(k).noalias() = cov.sqrt_factor(k, l) * z;
    }
  }
  return real;
}

}  // namespace cfmimo

#include "cfmimo/covariance.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace cfmimo {

double large_scale_fading(double distance_m, double shadow_db,
                          double const_db, double slope_db) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("large_scale_fading: distance must be > 0");
  }
  const double beta_db =
      const_db - slope_db * std::log10(distance_m) + shadow_db;
  return std::pow(10.0, beta_db / 10.0);
}

Eigen::MatrixXcd spatial_covariance(double nominal_angle_rad, double asd_rad,
                                    double beta, int antennas,
                                    double spacing) {
  const double sin_phi = std::sin(nominal_angle_rad);
  const double cos_phi = std::cos(nominal_angle_rad);
  const double two_pi_d = 2.0 * std::numbers::pi * spacing;

  Eigen::MatrixXcd R(antennas, antennas);
  for (int m = 0; m < antennas; ++m) {
    for (int n = 0; n <= m; ++n) {
      const double offset = two_pi_d * (m - n);
      const double phase = offset * sin_phi;
      const double damp = asd_rad * offset * cos_phi;
      const std::complex<double> entry =
          beta * std::exp(-0.5 * damp * damp) *
          std::complex<double>(std::cos(phase), std::sin(phase));
      R(m, n) = entry;
      R(n, m) = std::conj(entry);
    }
  }

  // The matrix is PSD in exact arithmetic (it samples a Gaussian
  // characteristic function); clip eigenvalue noise below zero, which
  // stays within 1e-12 * trace.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(R);
  if (es.eigenvalues().minCoeff() < 0.0) {
    const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
    R = es.eigenvectors() * clipped.asDiagonal() *
        es.eigenvectors().adjoint();
    R = ((R + R.adjoint()) * 0.5).eval();
  }
  return R;
}

CovarianceSet::CovarianceSet(int ue_count, int ap_count, int antennas)
    : ue_count_(ue_count),
      ap_count_(ap_count),
      antennas_(antennas),
      covariance_(static_cast<std::size_t>(ue_count) * ap_count),
      factor_(static_cast<std::size_t>(ue_count) * ap_count),
      beta_(Eigen::MatrixXd::Zero(ue_count, ap_count)) {}

void CovarianceSet::set(int k, int l, const Eigen::MatrixXcd& covariance) {
  const int i = index(k, l);
  covariance_[i] = covariance;
  beta_(k, l) = covariance.trace().real() / antennas_;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(covariance);
  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  factor_[i] = es.eigenvectors() * clipped.cwiseSqrt().asDiagonal();
}

CovarianceSet build_covariance_set(const Layout& layout,
                                   const NetworkConfig& config,
                                   std::mt19937_64& eng) {
  const int ue_count = static_cast<int>(layout.ue_positions.rows());
  const int ap_count = static_cast<int>(layout.ap_positions.rows());
  const double asd_rad = config.asd_deg * std::numbers::pi / 180.0;

  CovarianceSet cov(ue_count, ap_count, config.antennas_per_ap);
  std::normal_distribution<double> shadow(0.0, 1.0);

  for (int k = 0; k < ue_count; ++k) {
    const Eigen::Vector2d ue = layout.ue_positions.row(k).transpose();
    for (int l = 0; l < ap_count; ++l) {
      const Eigen::Vector2d ap = layout.ap_positions.row(l).transpose();
      const double shadow_db =
          config.shadow_std_db > 0.0 ? config.shadow_std_db * shadow(eng)
                                     : 0.0;
      const Eigen::Vector2d disp =
          wrap_displacement(ap, ue, config.area_side);
      const double dist = std::sqrt(disp.squaredNorm() +
                                    config.ap_height_delta *
                                        config.ap_height_delta);
      const double beta =
          large_scale_fading(dist, shadow_db, config.pathloss_const_db,
                             config.pathloss_slope_db);
      const double bearing = std::atan2(disp.y(), disp.x());
      cov.set(k, l,
              spatial_covariance(bearing, asd_rad, beta,
                                 config.antennas_per_ap,
                                 config.antenna_spacing));
    }
  }
  return cov;
}

}  // namespace cfmimo

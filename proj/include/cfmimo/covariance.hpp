#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/config.hpp"
#include "cfmimo/geometry.hpp"

namespace cfmimo {

// Large-scale fading coefficient (linear scale) from log-distance
// pathloss plus a shadowing term in dB. Throws std::domain_error for
// non-positive distances.
double large_scale_fading(double distance_m, double shadow_db,
                          double const_db = -30.5, double slope_db = 36.7);

// Gaussian local-scattering spatial covariance of a uniform linear
// array: entry (m, n) is
//   beta * exp(j 2 pi spacing (m-n) sin(phi))
//        * exp(-(asd^2 / 2) (2 pi spacing (m-n) cos(phi))^2),
// the characteristic function of a Gaussian angular power density
// linearized around the nominal bearing phi. Eigenvalues are clipped at
// zero afterwards (numerical noise only; the matrix is PSD in exact
// arithmetic), so the result is Hermitian PSD with trace N * beta up to
// machine precision.
Eigen::MatrixXcd spatial_covariance(double nominal_angle_rad, double asd_rad,
                                    double beta, int antennas,
                                    double spacing);

// Per-(UE, AP) spatial covariance matrices and large-scale coefficients
// for one UE placement, with cached PSD square-root factors for channel
// sampling.
class CovarianceSet {
 public:
  CovarianceSet(int ue_count, int ap_count, int antennas);

  int ue_count() const { return ue_count_; }
  int ap_count() const { return ap_count_; }
  int antennas() const { return antennas_; }

  // Stores R for pair (k, l); derives beta = trace(R)/N and the factor
  // F with F F^H = R (eigenvalues below zero clipped before the sqrt).
  void set(int k, int l, const Eigen::MatrixXcd& covariance);

  const Eigen::MatrixXcd& covariance(int k, int l) const {
    return covariance_[index(k, l)];
  }
  const Eigen::MatrixXcd& sqrt_factor(int k, int l) const {
    return factor_[index(k, l)];
  }
  double beta(int k, int l) const { return beta_(k, l); }
  const Eigen::MatrixXd& beta() const { return beta_; }  // K x L

 private:
  int index(int k, int l) const { return k * ap_count_ + l; }

  int ue_count_;
  int ap_count_;
  int antennas_;
  std::vector<Eigen::MatrixXcd> covariance_;
  std::vector<Eigen::MatrixXcd> factor_;
  Eigen::MatrixXd beta_;
};

// Distances and bearings via the wrap-around metric, i.i.d. lognormal
// shadowing (one normal draw per (k, l) pair, k-major order), covariance
// via the local-scattering model.
CovarianceSet build_covariance_set(const Layout& layout,
                                   const NetworkConfig& config,
                                   std::mt19937_64& eng);

}  // namespace cfmimo

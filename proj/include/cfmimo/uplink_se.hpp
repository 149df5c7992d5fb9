#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/ap_selection.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/covariance.hpp"
#include "cfmimo/pilot_assignment.hpp"
#include "cfmimo/rng.hpp"

namespace cfmimo {

// Pilot-phase parameters shared by estimation and combining.
struct PilotTraining {
  int pilot_len = 1;
  Eigen::VectorXd ue_power;  // K entries, watts
  double noise_power = 0.0;  // sigma^2, watts
};

// Substream tags under a per-realization RNG key.
namespace streams {
inline constexpr std::uint64_t kChannels = 1;
inline constexpr std::uint64_t kPilotNoise = 2;
}  // namespace streams

// Projected received pilot signal per (pilot, AP).
struct PilotObservation {
  std::vector<Eigen::MatrixXcd> per_ap;  // L entries, N x pilot_len; column t = y_tl

  Eigen::MatrixXcd::ConstColXpr y(int t, int l) const {
    return per_ap[l].col(t);
  }
};

// y_tl = sum_{i on pilot t} sqrt(pilot_len p_i) h_il + n_tl with
// n_tl ~ CN(0, sigma^2 I), independent across (t, l).
//
// Noise substreams are keyed by (AP, slot occupants) rather than by the
// slot label, so a UE keeps the same training noise under any pilot
// relabeling. Paired scheme comparisons stay aligned per UE; within one
// assignment the keys are disjoint across slots, so draws are still
// independent. Empty slots key off the slot label.
PilotObservation observe_pilots(const ChannelRealization& real,
                                const PilotAssignment& assignment,
                                const PilotTraining& training,
                                const RngKey& noise_key);

// MMSE channel estimates plus the estimate covariance
// E{h_hat h_hat^H} and the estimation-error covariance R - estimate_cov
// per (UE, AP) pair.
struct EstimateSet {
  std::vector<Eigen::MatrixXcd> h_hat_per_ap;  // L entries, N x K
  std::vector<Eigen::MatrixXcd> estimate_cov;  // k * L + l, N x N
  std::vector<Eigen::MatrixXcd> error_cov;     // k * L + l, N x N

  Eigen::MatrixXcd::ConstColXpr h_hat(int k, int l) const {
    return h_hat_per_ap[l].col(k);
  }
};

// Realization-independent part of MMSE estimation for a fixed pilot
// assignment: per-pair linear maps M_kl with h_hat_kl = M_kl y_tl, and
// the estimate/error covariances. All built from Hermitian solves
// against the received-pilot correlation
// sum_{i on t} pilot_len p_i R_il + sigma^2 I.
class MmseContext {
 public:
  MmseContext(const CovarianceSet& cov, const PilotAssignment& assignment,
              const PilotTraining& training);

  const Eigen::MatrixXcd& estimator(int k, int l) const {
    return estimator_[k * ap_count_ + l];
  }
  const Eigen::MatrixXcd& estimate_cov(int k, int l) const {
    return estimate_cov_[k * ap_count_ + l];
  }
  const Eigen::MatrixXcd& error_cov(int k, int l) const {
    return error_cov_[k * ap_count_ + l];
  }

  // Applies the estimator maps to one observation.
  void estimate_into(const PilotObservation& obs,
                     const PilotAssignment& assignment,
                     std::vector<Eigen::MatrixXcd>& h_hat_per_ap) const;

  int ue_count() const { return ue_count_; }
  int ap_count() const { return ap_count_; }

 private:
  int ue_count_ = 0;
  int ap_count_ = 0;
  std::vector<Eigen::MatrixXcd> estimator_;
  std::vector<Eigen::MatrixXcd> estimate_cov_;
  std::vector<Eigen::MatrixXcd> error_cov_;
};

// One-shot estimation op. Throws std::runtime_error on a non-finite
// observation.
EstimateSet mmse_estimate(const PilotObservation& obs,
                          const CovarianceSet& cov,
                          const PilotAssignment& assignment,
                          const PilotTraining& training);

// Local MMSE combining vectors,
//   a_kl = p_k (sum_{i in U_l} p_i (h_hat_il h_hat_il^H + error_cov_il)
//               + sigma^2 I)^{-1} h_hat_kl,
// computed for every k in U_l via Hermitian solves. Returned per AP as
// an N x K matrix; columns of UEs not served by that AP are zero.
std::vector<Eigen::MatrixXcd> combine_local(const EstimateSet& est,
                                            const ServingMap& serving,
                                            const PilotTraining& training);

// Sample-mean statistics of the effective channel seen by the CPU for
// one UE, restricted to its serving set A_k:
//   gain[a]            = E{a_kl^H h_kl},         l = A_k[a]
//   cross_gain[i]      = E{g g^H}, g[a] = a_kl^H h_il  (one per UE i)
//   combiner_energy[a] = E{|a_kl|^2}
struct UatFStatistics {
  Eigen::VectorXcd gain;
  std::vector<Eigen::MatrixXcd> cross_gain;  // K entries, |A_k| x |A_k|
  Eigen::VectorXd combiner_energy;
  int n_samples = 0;
};

// Monte Carlo accumulation over fresh channel/noise realizations. Each
// realization r draws from realization_root.child(r, streams::...), so
// results are reproducible and independent of execution order.
std::vector<UatFStatistics> accumulate_uatf(const CovarianceSet& cov,
                                            const PilotAssignment& assignment,
                                            const ServingMap& serving,
                                            const PilotTraining& training,
                                            const RngKey& realization_root,
                                            int n_realizations);

enum class SeWeighting {
  kLsfd,   // optimal large-scale fading decoding weights
  kEqual,  // all-ones weights over the serving set
};

// Use-and-then-forget spectral efficiency of UE k in bits/s/Hz with the
// quadratic-form SINR over the serving set,
//   SE = (block_len - pilot_len) / block_len
//        * log2(1 + p_k gain^H D^{-1} gain),
//   D  = sum_i p_i cross_gain[i] - p_k gain gain^H
//        + sigma^2 diag(combiner_energy),
// where D is symmetrized and eigenvalue-floored at 1e-12 trace before
// the solve. Returns nullopt when the accumulated statistics are
// unusable (non-finite or nonpositive trace), which signals
// undersampling.
std::optional<double> spectral_efficiency(const UatFStatistics& stats, int ue,
                                          const Eigen::VectorXd& ue_power,
                                          double noise_power, int pilot_len,
                                          int block_len,
                                          SeWeighting weighting = SeWeighting::kLsfd);

}  // namespace cfmimo

#include "cfmimo/uplink_se.hpp"

#include <cmath>
#include <stdexcept>

namespace cfmimo {

namespace {

void check_training(const PilotTraining& training, int ue_count,
                    int pilot_count) {
  if (training.pilot_len != pilot_count) {
    throw std::invalid_argument(
        "PilotTraining.pilot_len does not match the pilot assignment");
  }
  if (training.ue_power.size() != ue_count) {
    throw std::invalid_argument("PilotTraining.ue_power has wrong length");
  }
}

std::uint64_t slot_noise_id(const std::vector<int>& occupants, int ue_count,
                            int slot) {
  // Occupied slots key off their lowest occupant; empty slots key off the
  // slot label, shifted past the UE id range so the two cannot collide.
  return occupants.empty()
             ? static_cast<std::uint64_t>(ue_count + slot)
             : static_cast<std::uint64_t>(occupants.front());
}

}  // namespace

PilotObservation observe_pilots(const ChannelRealization& real,
                                const PilotAssignment& assignment,
                                const PilotTraining& training,
                                const RngKey& noise_key) {
  const int ap_count = real.ap_count();
  const int ue_count = real.ue_count();
  const int antennas = real.antennas();
  const int pilot_len = assignment.pilot_count;
  check_training(training, ue_count, pilot_len);

  const auto slots = copilot_sets(assignment);
  const double sigma = std::sqrt(training.noise_power);

  PilotObservation obs;
  obs.per_ap.assign(ap_count, Eigen::MatrixXcd(antennas, pilot_len));
  Eigen::VectorXcd z(antennas);

  for (int l = 0; l < ap_count; ++l) {
    for (int t = 0; t < pilot_len; ++t) {
      auto y = obs.per_ap[l].col(t);
      y.setZero();
      for (int i : slots[t]) {
        y.noalias() +=
            std::sqrt(pilot_len * training.ue_power[i]) * real.h(i, l);
      }
      auto eng = noise_key.child(static_cast<std::uint64_t>(l),
                                 slot_noise_id(slots[t], ue_count, t))
                     .engine();
      sample_cscg(z, eng);
      y.noalias() += sigma * z;
    }
  }
  return obs;
}

MmseContext::MmseContext(const CovarianceSet& cov,
                         const PilotAssignment& assignment,
                         const PilotTraining& training)
    : ue_count_(cov.ue_count()), ap_count_(cov.ap_count()) {
  check_training(training, ue_count_, assignment.pilot_count);
  if (assignment.ue_count() != ue_count_) {
    throw std::invalid_argument("assignment/covariance UE count mismatch");
  }
  if (!(training.noise_power > 0.0)) {
    throw std::domain_error("MmseContext: noise_power must be > 0");
  }

  const int antennas = cov.antennas();
  const int pilot_len = assignment.pilot_count;
  const auto slots = copilot_sets(assignment);

  estimator_.resize(static_cast<std::size_t>(ue_count_) * ap_count_);
  estimate_cov_.resize(estimator_.size());
  error_cov_.resize(estimator_.size());

  Eigen::MatrixXcd pilot_corr(antennas, antennas);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(antennas);

  for (int t = 0; t < pilot_len; ++t) {
    if (slots[t].empty()) continue;
    for (int l = 0; l < ap_count_; ++l) {
      pilot_corr = training.noise_power *
            Eigen::MatrixXcd::Identity(antennas, antennas);
      for (int i : slots[t]) {
        pilot_corr.noalias() += (pilot_len * training.ue_power[i]) * cov.covariance(i, l);
      }
      ldlt.compute(pilot_corr);
      for (int k : slots[t]) {
        const double scale = std::sqrt(pilot_len * training.ue_power[k]);
        const Eigen::MatrixXcd solved = ldlt.solve(cov.covariance(k, l));
        const int idx = k * ap_count_ + l;
        estimator_[idx] = scale * solved.adjoint();
        Eigen::MatrixXcd b = scale * estimator_[idx] * cov.covariance(k, l);
        b = (0.5 * (b + b.adjoint())).eval();
        estimate_cov_[idx] = b;
        error_cov_[idx] = cov.covariance(k, l) - b;
      }
    }
  }
}

void MmseContext::estimate_into(
    const PilotObservation& obs, const PilotAssignment& assignment,
    std::vector<Eigen::MatrixXcd>& h_hat_per_ap) const {
  for (int l = 0; l < ap_count_; ++l) {
    for (int k = 0; k < ue_count_; ++k) {
      h_hat_per_ap[l].col(k).noalias() =
          estimator(k, l) * obs.y(assignment.pilot_of[k], l);
    }
  }
}

EstimateSet mmse_estimate(const PilotObservation& obs,
                          const CovarianceSet& cov,
                          const PilotAssignment& assignment,
                          const PilotTraining& training) {
  for (const auto& block : obs.per_ap) {
    if (!block.allFinite()) {
      throw std::runtime_error("mmse_estimate: non-finite pilot observation");
    }
  }

  const MmseContext ctx(cov, assignment, training);
  EstimateSet est;
  est.h_hat_per_ap.assign(cov.ap_count(),
                          Eigen::MatrixXcd(cov.antennas(), cov.ue_count()));
  ctx.estimate_into(obs, assignment, est.h_hat_per_ap);

  est.estimate_cov.resize(static_cast<std::size_t>(cov.ue_count()) * cov.ap_count());
  est.error_cov.resize(est.estimate_cov.size());
  for (int k = 0; k < cov.ue_count(); ++k) {
    for (int l = 0; l < cov.ap_count(); ++l) {
      est.estimate_cov[k * cov.ap_count() + l] = ctx.estimate_cov(k, l);
      est.error_cov[k * cov.ap_count() + l] = ctx.error_cov(k, l);
    }
  }
  return est;
}

std::vector<Eigen::MatrixXcd> combine_local(const EstimateSet& est,
                                            const ServingMap& serving,
                                            const PilotTraining& training) {
  const int ap_count = static_cast<int>(est.h_hat_per_ap.size());
  const int antennas = static_cast<int>(est.h_hat_per_ap.front().rows());
  const int ue_count = static_cast<int>(est.h_hat_per_ap.front().cols());

  const auto served = serving.served_by();
  std::vector<Eigen::MatrixXcd> combiner(
      ap_count, Eigen::MatrixXcd::Zero(antennas, ue_count));

  Eigen::MatrixXcd gram(antennas, antennas);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(antennas);

  for (int l = 0; l < ap_count; ++l) {
    if (served[l].empty()) continue;
    gram = training.noise_power *
           Eigen::MatrixXcd::Identity(antennas, antennas);
    for (int i : served[l]) {
      const auto h_hat = est.h_hat(i, l);
      gram.noalias() += training.ue_power[i] * (h_hat * h_hat.adjoint());
      gram.noalias() += training.ue_power[i] * est.error_cov[i * ap_count + l];
    }
    ldlt.compute(gram);
    for (int k : served[l]) {
      combiner[l].col(k).noalias() =
          training.ue_power[k] * ldlt.solve(est.h_hat(k, l));
    }
  }
  return combiner;
}

std::vector<UatFStatistics> accumulate_uatf(const CovarianceSet& cov,
                                            const PilotAssignment& assignment,
                                            const ServingMap& serving,
                                            const PilotTraining& training,
                                            const RngKey& realization_root,
                                            int n_realizations) {
  if (n_realizations < 1) {
    throw std::invalid_argument("accumulate_uatf: need n_realizations >= 1");
  }
  const int ue_count = cov.ue_count();
  const int ap_count = cov.ap_count();
  const int antennas = cov.antennas();
  if (serving.ue_count() != ue_count || serving.ap_count != ap_count) {
    throw std::invalid_argument("accumulate_uatf: serving map mismatch");
  }

  const MmseContext ctx(cov, assignment, training);
  const auto served = serving.served_by();
  const auto slots = copilot_sets(assignment);
  const int pilot_len = assignment.pilot_count;
  const double sigma = std::sqrt(training.noise_power);

  struct OccupiedSlot {
    const std::vector<int>* occupants;
    std::uint64_t noise_id;
  };
  std::vector<OccupiedSlot> occupied;
  for (int t = 0; t < pilot_len; ++t) {
    if (!slots[t].empty()) {
      occupied.push_back({&slots[t], slot_noise_id(slots[t], ue_count, t)});
    }
  }

  // Realization-independent part of the combining gram matrix.
  std::vector<Eigen::MatrixXcd> gram_base(ap_count);
  for (int l = 0; l < ap_count; ++l) {
    gram_base[l] = training.noise_power *
                   Eigen::MatrixXcd::Identity(antennas, antennas);
    for (int i : served[l]) {
      gram_base[l].noalias() += training.ue_power[i] * ctx.error_cov(i, l);
    }
  }

  std::vector<UatFStatistics> stats(ue_count);
  std::vector<Eigen::VectorXcd> g_buf(ue_count);
  for (int k = 0; k < ue_count; ++k) {
    const auto size = static_cast<Eigen::Index>(serving.serving[k].size());
    stats[k].gain = Eigen::VectorXcd::Zero(size);
    stats[k].combiner_energy = Eigen::VectorXd::Zero(size);
    stats[k].cross_gain.assign(ue_count, Eigen::MatrixXcd::Zero(size, size));
    g_buf[k].resize(size);
  }

  std::vector<Eigen::MatrixXcd> h(ap_count,
                                  Eigen::MatrixXcd(antennas, ue_count));
  std::vector<Eigen::MatrixXcd> h_hat(
      ap_count, Eigen::MatrixXcd::Zero(antennas, ue_count));
  std::vector<Eigen::MatrixXcd> combiner(
      ap_count, Eigen::MatrixXcd::Zero(antennas, ue_count));
  std::vector<Eigen::MatrixXcd> local_gain(
      ap_count, Eigen::MatrixXcd::Zero(ue_count, ue_count));
  Eigen::VectorXcd z(antennas);
  Eigen::VectorXcd y(antennas);
  Eigen::MatrixXcd gram(antennas, antennas);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(antennas);

  for (int r = 0; r < n_realizations; ++r) {
    const RngKey realization = realization_root.child(r);

    auto channel_eng = realization.child(streams::kChannels).engine();
    for (int k = 0; k < ue_count; ++k) {
      for (int l = 0; l < ap_count; ++l) {
        sample_cscg(z, channel_eng);
        h[l].col(k).noalias() = cov.sqrt_factor(k, l) * z;
      }
    }

    const RngKey noise_root = realization.child(streams::kPilotNoise);
    for (int l = 0; l < ap_count; ++l) {
      for (const auto& slot : occupied) {
        y.setZero();
        for (int i : *slot.occupants) {
          y.noalias() += std::sqrt(pilot_len * training.ue_power[i]) * h[l].col(i);
        }
        auto noise_eng =
            noise_root.child(static_cast<std::uint64_t>(l), slot.noise_id)
                .engine();
        sample_cscg(z, noise_eng);
        y.noalias() += sigma * z;
        for (int i : *slot.occupants) {
          h_hat[l].col(i).noalias() = ctx.estimator(i, l) * y;
        }
      }
    }

    for (int l = 0; l < ap_count; ++l) {
      if (served[l].empty()) continue;
      gram = gram_base[l];
      for (int i : served[l]) {
        gram.noalias() +=
            training.ue_power[i] * (h_hat[l].col(i) * h_hat[l].col(i).adjoint());
      }
      ldlt.compute(gram);
      for (int k : served[l]) {
        combiner[l].col(k).noalias() =
            training.ue_power[k] * ldlt.solve(h_hat[l].col(k));
      }
      // local_gain[l](k, i) = a_kl^H h_il; rows of unserved UEs stay zero.
      local_gain[l].noalias() = combiner[l].adjoint() * h[l];
    }

    for (int k = 0; k < ue_count; ++k) {
      const auto& ap_set = serving.serving[k];
      auto& st = stats[k];
      auto& g = g_buf[k];
      for (std::size_t a = 0; a < ap_set.size(); ++a) {
        const int l = ap_set[a];
        st.gain[static_cast<Eigen::Index>(a)] += local_gain[l](k, k);
        st.combiner_energy[static_cast<Eigen::Index>(a)] +=
            combiner[l].col(k).squaredNorm();
      }
      for (int i = 0; i < ue_count; ++i) {
        for (std::size_t a = 0; a < ap_set.size(); ++a) {
          g[static_cast<Eigen::Index>(a)] = local_gain[ap_set[a]](k, i);
        }
        st.cross_gain[i].selfadjointView<Eigen::Lower>().rankUpdate(g, 1.0);
      }
    }
  }

  const double inv = 1.0 / n_realizations;
  for (int k = 0; k < ue_count; ++k) {
    stats[k].gain *= inv;
    stats[k].combiner_energy *= inv;
    stats[k].n_samples = n_realizations;
    for (int i = 0; i < ue_count; ++i) {
      const Eigen::MatrixXcd full =
          stats[k].cross_gain[i].selfadjointView<Eigen::Lower>();
      stats[k].cross_gain[i] = full * inv;
    }
  }
  return stats;
}

std::optional<double> spectral_efficiency(const UatFStatistics& stats, int ue,
                                          const Eigen::VectorXd& ue_power,
                                          double noise_power, int pilot_len,
                                          int block_len, SeWeighting weighting) {
  const auto size = stats.gain.size();
  const int ue_count = static_cast<int>(stats.cross_gain.size());
  if (size < 1 || ue < 0 || ue >= ue_count ||
      ue_power.size() != ue_count) {
    throw std::invalid_argument("spectral_efficiency: inconsistent inputs");
  }
  if (pilot_len < 1 || pilot_len >= block_len) {
    throw std::invalid_argument("spectral_efficiency: invalid pilot_len/block_len");
  }

  Eigen::MatrixXcd denom_matrix = Eigen::MatrixXcd::Zero(size, size);
  for (int i = 0; i < ue_count; ++i) denom_matrix.noalias() += ue_power[i] * stats.cross_gain[i];
  denom_matrix.noalias() -= ue_power[ue] * (stats.gain * stats.gain.adjoint());
  denom_matrix.diagonal() += (noise_power * stats.combiner_energy).cast<std::complex<double>>();
  denom_matrix = (0.5 * (denom_matrix + denom_matrix.adjoint())).eval();

  if (!denom_matrix.allFinite() || !stats.gain.allFinite()) return std::nullopt;
  const double trace = denom_matrix.trace().real();
  if (!(trace > 0.0)) return std::nullopt;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(denom_matrix);
  const Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(1e-12 * trace);

  double sinr = 0.0;
  if (weighting == SeWeighting::kLsfd) {
    const Eigen::VectorXcd coeff = es.eigenvectors().adjoint() * stats.gain;
    for (Eigen::Index j = 0; j < size; ++j) {
      sinr += std::norm(coeff[j]) / lambda[j];
    }
    sinr *= ue_power[ue];
  } else {
    const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(size);
    const Eigen::VectorXcd q = es.eigenvectors().adjoint() * ones;
    double denom = 0.0;
    for (Eigen::Index j = 0; j < size; ++j) denom += lambda[j] * std::norm(q[j]);
    sinr = ue_power[ue] * std::norm(stats.gain.sum()) / denom;
  }

  const double prelog =
      static_cast<double>(block_len - pilot_len) / static_cast<double>(block_len);
  return prelog * std::log2(1.0 + sinr);
}

}  // namespace cfmimo

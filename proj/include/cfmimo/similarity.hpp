#pragma once

#include <complex>

#include <Eigen/Dense>

#include "cfmimo/channel.hpp"
#include "cfmimo/covariance.hpp"

namespace cfmimo {

enum class SimilarityMetric { kStatistical, kInstantaneous };

// Pairwise UE channel similarity, symmetric with entries in [0, 1].
// Statistical entries are sqrt(E{|rho_kv|^2}) from the covariance trace
// form; instantaneous entries are |rho_kv| of one realization. The
// diagonal is zero and ignored by consumers.
struct UESimilarityMatrix {
  Eigen::MatrixXd s;  // K x K
  SimilarityMetric metric = SimilarityMetric::kStatistical;
};

// Pairwise AP channel similarity, same conventions.
struct APSimilarityMatrix {
  Eigen::MatrixXd e;  // L x L
};

// Normalized inner product of two stacked channel vectors,
// h_k^H h_v / (|h_k| |h_v|). Magnitude is at most 1. Throws
// std::domain_error if either vector has zero norm.
std::complex<double> instantaneous_similarity(
    const Eigen::Ref<const Eigen::VectorXcd>& h_k,
    const Eigen::Ref<const Eigen::VectorXcd>& h_v);

// Expected squared similarity of two UEs' channels,
//   sum_l tr(R_kl R_vl) / (sum_l tr(R_kl) * sum_l tr(R_vl)),
// in [0, 1]. Throws std::domain_error if either UE has zero total trace.
double expected_similarity_ue(const CovarianceSet& cov, int k, int v);

// Expected squared similarity of two APs' collective channels,
//   sum_k tr(R_kl R_kj) / (sum_k tr(R_kl) * sum_k tr(R_kj)).
// Symmetric in (l, j). Throws std::domain_error on zero total trace.
double expected_similarity_ap(const CovarianceSet& cov, int l, int j);

// Forming either matrix costs O(K^2 L N^2) resp. O(L^2 K N^2); this is
// the dominant cost of the assignment and selection algorithms built on
// top of them.
UESimilarityMatrix ue_similarity_matrix(const CovarianceSet& cov);
UESimilarityMatrix ue_similarity_matrix(const ChannelRealization& real);
APSimilarityMatrix ap_similarity_matrix(const CovarianceSet& cov);

}  // namespace cfmimo

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cfmimo/channel.hpp"
#include "cfmimo/similarity.hpp"

namespace cfmimo {

enum class ApScheme { kCapaSelect, kAllAps, kTopM };

// Per-UE serving AP sets A_k; each set nonempty, ascending AP indices.
struct ServingMap {
  std::vector<std::vector<int>> serving;  // K entries
  int ap_count = 0;
  ApScheme scheme = ApScheme::kAllAps;

  int ue_count() const { return static_cast<int>(serving.size()); }

  // Inverse map: served_by[l] lists the UEs served by AP l, ascending.
  std::vector<std::vector<int>> served_by() const;
};

// Disjoint nonempty AP groups covering {0..L-1}.
struct APGroups {
  std::vector<std::vector<int>> groups;
};

// Greedy complete-linkage grouping: AP l joins the first existing group
// whose every member j has e_lj < threshold, otherwise starts a new
// group. O(L^2) comparisons after the similarity matrix is available.
APGroups group_aps(const APSimilarityMatrix& ap_sim, double threshold);

// Similarity threshold as a quantile (default median) of the
// off-diagonal similarity entries. Throws std::domain_error for L < 2.
double default_similarity_threshold(const APSimilarityMatrix& ap_sim,
                                    double quantile = 0.5);

// Literal baseline gain threshold: mean per-antenna channel power of one
// realization, (1 / LNK) sum_{k,l} |h_kl|^2. Kept for compatibility;
// note it carries channel-power units, not normalized-similarity units.
double literal_gain_threshold(const ChannelRealization& real);

// Per UE and group, keep the members whose large-scale coefficient is at
// least the group mean; A_k is the union over groups. When
// assign_complement is set, the below-mean complement is kept instead
// (literal pseudo-code variant); an empty result falls back to the
// single argmax-beta AP.
ServingMap select_capa_aps(const APGroups& groups,
                           const Eigen::MatrixXd& beta,
                           bool assign_complement = false);

ServingMap select_all(int ue_count, int ap_count);

// The M strongest APs by beta, ties to the lowest index. Throws
// std::domain_error unless 1 <= M <= L.
ServingMap select_top_m(const Eigen::MatrixXd& beta, int m);

// Interpolated quantile of a sample set (rank (n-1) q between order
// statistics). Shared by threshold selection and percentile reporting.
double quantile(std::vector<double> samples, double q);

}  // namespace cfmimo

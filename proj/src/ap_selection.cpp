#include "cfmimo/ap_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cfmimo {

std::vector<std::vector<int>> ServingMap::served_by() const {
  std::vector<std::vector<int>> by_ap(ap_count);
  for (int k = 0; k < ue_count(); ++k) {
    for (int l : serving[k]) by_ap[l].push_back(k);
  }
  return by_ap;
}

APGroups group_aps(const APSimilarityMatrix& ap_sim, double threshold) {
  const int ap_count = static_cast<int>(ap_sim.e.rows());
  APGroups out;
  for (int l = 0; l < ap_count; ++l) {
    bool placed = false;
    for (auto& group : out.groups) {
      // column read keeps the scan contiguous (the matrix is symmetric)
      const bool compatible =
          std::all_of(group.begin(), group.end(), [&](int j) {
            return ap_sim.e(j, l) < threshold;
          });
      if (compatible) {
        group.push_back(l);
        placed = true;
        break;
      }
    }
    if (!placed) out.groups.push_back({l});
  }
  return out;
}

double quantile(std::vector<double> samples, double q) {
  if (samples.empty()) throw std::domain_error("quantile: empty sample set");
  std::sort(samples.begin(), samples.end());
  const double rank = q * static_cast<double>(samples.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  const double frac = rank - static_cast<double>(lo);
  return samples[lo] + frac * (samples[hi] - samples[lo]);
}

double default_similarity_threshold(const APSimilarityMatrix& ap_sim,
                                    double q) {
  const int ap_count = static_cast<int>(ap_sim.e.rows());
  if (ap_count < 2) {
    throw std::domain_error(
        "default_similarity_threshold: need at least two APs");
  }
  std::vector<double> offdiag;
  offdiag.reserve(static_cast<std::size_t>(ap_count) * (ap_count - 1) / 2);
  for (int l = 0; l < ap_count; ++l) {
    for (int j = l + 1; j < ap_count; ++j) offdiag.push_back(ap_sim.e(l, j));
  }
  return quantile(std::move(offdiag), q);
}

double literal_gain_threshold(const ChannelRealization& real) {
  double total = 0.0;
  for (const auto& block : real.per_ap) total += block.squaredNorm();
  const double entries = static_cast<double>(real.ap_count()) *
                         real.antennas() * real.ue_count();
  return total / entries;
}

ServingMap select_capa_aps(const APGroups& groups,
                           const Eigen::MatrixXd& beta,
                           bool assign_complement) {
  const int ue_count = static_cast<int>(beta.rows());
  const int ap_count = static_cast<int>(beta.cols());

  ServingMap out;
  out.scheme = ApScheme::kCapaSelect;
  out.ap_count = ap_count;
  out.serving.resize(ue_count);

  for (int k = 0; k < ue_count; ++k) {
    std::vector<int>& chosen = out.serving[k];
    for (const auto& group : groups.groups) {
      double mean = 0.0;
      for (int l : group) mean += beta(k, l);
      mean /= static_cast<double>(group.size());
      for (int l : group) {
        const bool strong = beta(k, l) >= mean;
        if (strong != assign_complement) chosen.push_back(l);
      }
    }
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    if (chosen.empty()) {
      // Every group contributed nothing (possible in complement mode);
      // an unserved UE has no defined SE, so keep the strongest AP.
      int best = 0;
      for (int l = 1; l < ap_count; ++l) {
        if (beta(k, l) > beta(k, best)) best = l;
      }
      chosen.push_back(best);
    }
  }
  return out;
}

ServingMap select_all(int ue_count, int ap_count) {
  ServingMap out;
  out.scheme = ApScheme::kAllAps;
  out.ap_count = ap_count;
  std::vector<int> all(ap_count);
  std::iota(all.begin(), all.end(), 0);
  out.serving.assign(ue_count, all);
  return out;
}

ServingMap select_top_m(const Eigen::MatrixXd& beta, int m) {
  const int ue_count = static_cast<int>(beta.rows());
  const int ap_count = static_cast<int>(beta.cols());
  if (m < 1 || m > ap_count) {
    throw std::domain_error("select_top_m: m out of range");
  }

  ServingMap out;
  out.scheme = ApScheme::kTopM;
  out.ap_count = ap_count;
  out.serving.resize(ue_count);

  std::vector<int> order(ap_count);
  for (int k = 0; k < ue_count; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return beta(k, a) > beta(k, b);
    });
    out.serving[k].assign(order.begin(), order.begin() + m);
    std::sort(out.serving[k].begin(), out.serving[k].end());
  }
  return out;
}

}  // namespace cfmimo

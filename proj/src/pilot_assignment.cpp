#include "cfmimo/pilot_assignment.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cfmimo {

namespace {

int least_used_pilot(const std::vector<int>& counts) {
  int best = 0;
  for (int p = 1; p < static_cast<int>(counts.size()); ++p) {
    if (counts[p] < counts[best]) best = p;
  }
  return best;
}

}  // namespace

PilotAssignment assign_capa(const Eigen::MatrixXd& similarity, int pilot_count,
                            const CapaOptions& options) {
  if (similarity.rows() != similarity.cols()) {
    throw std::invalid_argument("assign_capa: similarity must be square");
  }
  if (pilot_count < 1) throw std::invalid_argument("assign_capa: pilot_count must be >= 1");

  const int ue_count = static_cast<int>(similarity.rows());
  PilotAssignment out;
  out.scheme = PilotScheme::kCapa;
  out.pilot_count = pilot_count;
  out.pilot_of.assign(ue_count, -1);

  std::vector<int> counts(pilot_count, 0);
  std::vector<double> copilot_sim(pilot_count, 0.0);

  const int prefix = std::min(ue_count, pilot_count);
  for (int k = 0; k < prefix; ++k) {
    out.pilot_of[k] = k;
    ++counts[k];
  }

  for (int k = prefix; k < ue_count; ++k) {
    int chosen;
    if (options.literal_pilot_pool) {
      chosen = least_used_pilot(counts);
    } else {
      // Most similar predecessor; its pilot is excluded. Column reads
      // keep the scans contiguous (the matrix is symmetric).
      int most_similar = 0;
      for (int v = 1; v < k; ++v) {
        if (similarity(v, k) > similarity(most_similar, k)) most_similar = v;
      }
      const int excluded = out.pilot_of[most_similar];

      // Aggregate similarity toward the UEs already on each pilot.
      std::fill(copilot_sim.begin(), copilot_sim.end(), 0.0);
      for (int u = 0; u < k; ++u) copilot_sim[out.pilot_of[u]] += similarity(u, k);

      chosen = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int p = 0; p < pilot_count; ++p) {
        if (p == excluded) continue;
        if (copilot_sim[p] < best) {
          best = copilot_sim[p];
          chosen = p;
        }
      }
      if (chosen < 0) chosen = least_used_pilot(counts);  // pilot_count == 1
    }
    out.pilot_of[k] = chosen;
    ++counts[chosen];
  }
  return out;
}

PilotAssignment assign_random(int ue_count, int pilot_count, std::mt19937_64& eng) {
  if (ue_count < 1) {
    throw std::invalid_argument("assign_random: ue_count must be >= 1");
  }
  if (pilot_count < 1) {
    throw std::invalid_argument("assign_random: pilot_count must be >= 1");
  }

  PilotAssignment out;
  out.scheme = PilotScheme::kRandom;
  out.pilot_count = pilot_count;
  out.pilot_of.assign(ue_count, 0);

  std::vector<int> perm(pilot_count);
  for (int p = 0; p < pilot_count; ++p) perm[p] = p;
  for (int i = pilot_count - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(perm[i], perm[pick(eng)]);
  }

  const int prefix = std::min(ue_count, pilot_count);
  for (int k = 0; k < prefix; ++k) out.pilot_of[k] = perm[k];

  std::uniform_int_distribution<int> any(0, pilot_count - 1);
  for (int k = prefix; k < ue_count; ++k) out.pilot_of[k] = any(eng);
  return out;
}

std::vector<int> pilot_usage_counts(const PilotAssignment& assignment) {
  std::vector<int> counts(assignment.pilot_count, 0);
  for (int pilot : assignment.pilot_of) ++counts[pilot];
  return counts;
}

std::vector<std::vector<int>> copilot_sets(const PilotAssignment& assignment) {
  std::vector<std::vector<int>> sets(assignment.pilot_count);
  for (int k = 0; k < assignment.ue_count(); ++k) {
    sets[assignment.pilot_of[k]].push_back(k);
  }
  return sets;
}

}  // namespace cfmimo

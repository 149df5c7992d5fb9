#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

namespace cfmimo {

enum class PilotScheme { kCapa, kRandom };

struct PilotAssignment {
  std::vector<int> pilot_of;  // length K, entries in [0, pilot_count)
  int pilot_count = 0;
  PilotScheme scheme = PilotScheme::kRandom;

  int ue_count() const { return static_cast<int>(pilot_of.size()); }
};

struct CapaOptions {
  // Literal pseudo-code reading: after the orthogonal prefix the pool of
  // unassigned pilots is empty, so every remaining UE takes the least
  // used pilot and similarity is ignored.
  bool literal_pilot_pool = false;
};

// Similarity-aware pilot assignment. The first min(K, pilot_count) UEs get
// distinct pilots in index order. Each later UE k is barred from the
// pilot of its most similar predecessor and takes, among the remaining
// pilots, the one minimizing the summed similarity to the UEs already
// on it; with a single pilot the least-used fallback applies. Ties break
// to the lowest index throughout.
//
// Cost is O(K^2 + K pilot_count) given the similarity matrix; forming that
// matrix dominates end to end.
PilotAssignment assign_capa(const Eigen::MatrixXd& similarity, int pilot_count,
                            const CapaOptions& options = {});

// Random baseline: a uniform random permutation prefix of distinct
// pilots for the first min(K, pilot_count) UEs, then uniform i.i.d. picks.
PilotAssignment assign_random(int ue_count, int pilot_count, std::mt19937_64& eng);

// Usage count per pilot; sums to K.
std::vector<int> pilot_usage_counts(const PilotAssignment& assignment);

// UEs sharing each pilot, ascending within each set.
std::vector<std::vector<int>> copilot_sets(const PilotAssignment& assignment);

}  // namespace cfmimo

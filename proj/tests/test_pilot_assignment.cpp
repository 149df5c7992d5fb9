#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "cfmimo/pilot_assignment.hpp"
#include "cfmimo/rng.hpp"

using cfmimo::assign_capa;
using cfmimo::assign_random;
using cfmimo::CapaOptions;
using cfmimo::pilot_usage_counts;
using cfmimo::RngKey;

namespace {

Eigen::MatrixXd random_similarity(int ue_count, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(ue_count, ue_count);
  for (int k = 0; k < ue_count; ++k) {
    for (int v = k + 1; v < ue_count; ++v) {
      s(k, v) = s(v, k) = u(eng);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("orthogonal prefix covers all UEs when K <= pilot_count") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
  s(0, 1) = s(1, 0) = 0.9;
  const auto pa = assign_capa(s, 2);
  CHECK(pa.pilot_of == std::vector<int>{0, 1});

  auto eng = RngKey(1).engine();
  const auto s8 = random_similarity(8, eng);
  const auto pa8 = assign_capa(s8, 11);
  for (int k = 0; k < 8; ++k) CHECK(pa8.pilot_of[k] == k);
}

TEST_CASE("third UE avoids the pilot of its most similar predecessor") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
  s(2, 0) = s(0, 2) = 0.9;
  s(2, 1) = s(1, 2) = 0.1;
  const auto pa = assign_capa(s, 2);
  CHECK(pa.pilot_of == std::vector<int>{0, 1, 1});
}

TEST_CASE("single pilot forces full reuse") {
  auto eng = RngKey(2).engine();
  const auto s = random_similarity(5, eng);
  const auto pa = assign_capa(s, 1);
  CHECK(pa.pilot_of == std::vector<int>(5, 0));
}

TEST_CASE("never co-assigned with the most similar predecessor") {
  auto eng = RngKey(3).engine();
  for (int trial = 0; trial < 300; ++trial) {
    const int ue_count = 2 + static_cast<int>(eng() % 11);
    const int pilot_count = 2 + static_cast<int>(eng() % 4);
    const auto s = random_similarity(ue_count, eng);
    const auto pa = assign_capa(s, pilot_count);
    for (int k = std::min(ue_count, pilot_count); k < ue_count; ++k) {
      int most_similar = 0;
      for (int v = 1; v < k; ++v) {
        if (s(k, v) > s(k, most_similar)) most_similar = v;
      }
      CHECK(pa.pilot_of[k] != pa.pilot_of[most_similar]);
    }
  }
}

TEST_CASE("each greedy step minimizes the co-pilot similarity objective") {
  auto eng = RngKey(4).engine();
  for (int trial = 0; trial < 200; ++trial) {
    const int ue_count = 4 + static_cast<int>(eng() % 5);  // up to 8
    const int pilot_count = 2 + static_cast<int>(eng() % 2);     // 2..3
    const auto s = random_similarity(ue_count, eng);
    const auto pa = assign_capa(s, pilot_count);
    for (int k = pilot_count; k < ue_count; ++k) {
      int most_similar = 0;
      for (int v = 1; v < k; ++v) {
        if (s(k, v) > s(k, most_similar)) most_similar = v;
      }
      const int excluded = pa.pilot_of[most_similar];
      // direct recomputation of the local objective per candidate pilot
      double best = 1e300;
      int best_pilot = -1;
      for (int p = 0; p < pilot_count; ++p) {
        if (p == excluded) continue;
        double objective = 0.0;
        for (int u = 0; u < k; ++u) {
          if (pa.pilot_of[u] == p) objective += s(k, u);
        }
        if (objective < best) {
          best = objective;
          best_pilot = p;
        }
      }
      CHECK(pa.pilot_of[k] == best_pilot);
    }
  }
}

TEST_CASE("deterministic tie break picks the lowest pilot index") {
  // all similarities equal: UE 2's most similar predecessor is UE 0
  // (lowest index), so pilot 0 is excluded and pilot 1 wins over 2.
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(3, 3, 0.5);
  s.diagonal().setZero();
  const auto pa = assign_capa(s, 3);
  CHECK(pa.pilot_of == std::vector<int>{0, 1, 2});

  Eigen::MatrixXd s4 = Eigen::MatrixXd::Constant(4, 4, 0.5);
  s4.diagonal().setZero();
  const auto pa4 = assign_capa(s4, 2);
  // UE 2: excluded 0, only pilot 1 remains; UE 3: excluded 0, pilot 1
  CHECK(pa4.pilot_of == std::vector<int>{0, 1, 1, 1});
}

TEST_CASE("literal pilot pool mode reduces to least-used assignment") {
  auto eng = RngKey(5).engine();
  const auto s = random_similarity(7, eng);
  CapaOptions literal;
  literal.literal_pilot_pool = true;
  const auto pa = assign_capa(s, 3, literal);
  CHECK(pa.pilot_of == std::vector<int>{0, 1, 2, 0, 1, 2, 0});
}

TEST_CASE("random assignment: distinct prefix, determinism, uniformity") {
  auto e1 = RngKey(6).engine();
  auto e2 = RngKey(6).engine();
  const auto a = assign_random(8, 10, e1);
  const auto b = assign_random(8, 10, e2);
  CHECK(a.pilot_of == b.pilot_of);
  std::vector<bool> seen(10, false);
  for (int pilot : a.pilot_of) {
    CHECK(!seen[pilot]);
    seen[pilot] = true;
  }

  auto eng = RngKey(7).engine();
  const auto big = assign_random(10000, 10, eng);
  const auto counts = pilot_usage_counts(big);
  // prefix gives one each; the remaining 9990 are Binomial(9990, 1/10)
  const double mean = 1.0 + 9990.0 / 10.0;
  const double sd = std::sqrt(9990.0 * 0.1 * 0.9);
  for (int c : counts) {
    CHECK(std::abs(c - mean) <= 3.0 * sd);
  }
}

TEST_CASE("usage counts") {
  cfmimo::PilotAssignment pa;
  pa.pilot_of = {0, 1, 0};
  pa.pilot_count = 2;
  CHECK(pilot_usage_counts(pa) == std::vector<int>{2, 1});

  // fully orthogonal assignment: one use per pilot
  auto ortho_eng = RngKey(17).engine();
  const auto ortho = assign_random(10, 10, ortho_eng);
  CHECK(pilot_usage_counts(ortho) == std::vector<int>(10, 1));

  auto eng = RngKey(8).engine();
  for (int trial = 0; trial < 50; ++trial) {
    const int ue_count = 1 + static_cast<int>(eng() % 40);
    const int pilot_count = 1 + static_cast<int>(eng() % 12);
    const auto r = assign_random(ue_count, pilot_count, eng);
    const auto counts = pilot_usage_counts(r);
    int total = 0;
    for (int c : counts) total += c;
    CHECK(total == ue_count);
  }
}

TEST_CASE("copilot sets partition the UEs by pilot") {
  auto eng = RngKey(9).engine();
  const auto pa = assign_random(23, 5, eng);
  const auto sets = cfmimo::copilot_sets(pa);
  int total = 0;
  for (int t = 0; t < 5; ++t) {
    for (int k : sets[t]) {
      CHECK(pa.pilot_of[k] == t);
      ++total;
    }
  }
  CHECK(total == 23);
}

#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace cfmimo {

// splitmix64 finalizer, used to derive substream seeds.
std::uint64_t mix64(std::uint64_t x);

// Hierarchical RNG key. A child key is a deterministic function of the
// parent state and the child id, so any (seed, id path) names the same
// stream on every run regardless of evaluation order or threading.
class RngKey {
 public:
  explicit RngKey(std::uint64_t seed)
      : state_(mix64(seed + 0x9E3779B97F4A7C15ULL)) {}

  RngKey child(std::uint64_t id) const {
    return RngKey(FromState{}, mix64(state_ ^ mix64(id + 0xD1B54A32D192ED03ULL)));
  }

  template <typename... Ids>
  RngKey child(std::uint64_t id, Ids... rest) const {
    return child(id).child(rest...);
  }

  std::mt19937_64 engine() const { return std::mt19937_64(state_); }
  std::uint64_t state() const { return state_; }

 private:
  struct FromState {};
  RngKey(FromState, std::uint64_t state) : state_(state) {}
  std::uint64_t state_;
};

// Standard circularly-symmetric complex Gaussian vector, E|z_i|^2 = 1.
// Draw order is fixed (real then imaginary part, ascending index).
void sample_cscg(Eigen::Ref<Eigen::VectorXcd> out, std::mt19937_64& eng);
Eigen::VectorXcd sample_cscg(Eigen::Index n, std::mt19937_64& eng);

}  // namespace cfmimo

#include "cfmimo/rng.hpp"

namespace cfmimo {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

void sample_cscg(Eigen::Ref<Eigen::VectorXcd> out, std::mt19937_64& eng) {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double re = normal(eng);
    const double im = normal(eng);
    out[i] = std::complex<double>(re * kInvSqrt2, im * kInvSqrt2);
  }
}

Eigen::VectorXcd sample_cscg(Eigen::Index n, std::mt19937_64& eng) {
  Eigen::VectorXcd z(n);
  sample_cscg(z, eng);
  return z;
}

}  // namespace cfmimo

#include "cfmimo/geometry.hpp"

#include <cmath>
#include <limits>

namespace cfmimo {

Eigen::Vector2d wrap_displacement(const Eigen::Vector2d& a,
                                  const Eigen::Vector2d& b, double area_side) {
  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  double best_sq = std::numeric_limits<double>::infinity();
  for (int sx = -1; sx <= 1; ++sx) {
    for (int sy = -1; sy <= 1; ++sy) {
      const Eigen::Vector2d cand =
          b + area_side * Eigen::Vector2d(sx, sy) - a;
      const double sq = cand.squaredNorm();
      if (sq < best_sq) {
        best_sq = sq;
        best = cand;
      }
    }
  }
  return best;
}

double wrap_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     double area_side, double height_delta) {
  const Eigen::Vector2d d = wrap_displacement(a, b, area_side);
  return std::sqrt(d.squaredNorm() + height_delta * height_delta);
}

Layout place_network(const NetworkConfig& config, std::mt19937_64& eng) {
  config.validate();
  const int ap_count = config.ap_count;
  const int ue_count = config.ue_count;
  const double side = config.area_side;

  Layout layout;
  layout.ap_positions.resize(ap_count, 2);
  layout.ue_positions.resize(ue_count, 2);

  std::uniform_real_distribution<double> uniform(0.0, side);

  if (config.ap_layout == ApLayout::kGrid) {
    // ceil(sqrt(L)) cells per side, APs at cell centers, row-major with
    // x varying fastest; surplus points drop off the last rows. No
    // randomness, so grids are seed-independent.
    const int per_side =
        static_cast<int>(std::ceil(std::sqrt(static_cast<double>(ap_count))));
    const double spacing = side / per_side;
    for (int p = 0; p < ap_count; ++p) {
      const int row = p / per_side;
      const int col = p % per_side;
      layout.ap_positions(p, 0) = (col + 0.5) * spacing;
      layout.ap_positions(p, 1) = (row + 0.5) * spacing;
    }
  } else {
    for (int l = 0; l < ap_count; ++l) {
      layout.ap_positions(l, 0) = uniform(eng);
      layout.ap_positions(l, 1) = uniform(eng);
    }
  }

  for (int k = 0; k < ue_count; ++k) {
    layout.ue_positions(k, 0) = uniform(eng);
    layout.ue_positions(k, 1) = uniform(eng);
  }
  return layout;
}

}  // namespace cfmimo

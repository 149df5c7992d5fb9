#pragma once

#include <random>

#include <Eigen/Dense>

#include "cfmimo/config.hpp"

namespace cfmimo {

struct Layout {
  Eigen::MatrixX2d ap_positions;  // L x 2, meters
  Eigen::MatrixX2d ue_positions;  // K x 2, meters
};

// Displacement from a to the nearest of the nine wrap-around copies of b
// (shifts of +/- area_side in each axis). Ties resolve to the first copy
// in a fixed shift order, so results are deterministic.
Eigen::Vector2d wrap_displacement(const Eigen::Vector2d& a,
                                  const Eigen::Vector2d& b, double area_side);

// Torus metric over the square area, including a fixed vertical offset:
// sqrt(min planar squared distance over the 9 copies + height_delta^2).
double wrap_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     double area_side, double height_delta);

// AP positions on a ceil(sqrt(L))-aligned uniform grid (surplus grid
// points dropped from the last rows) or uniform i.i.d., per config;
// UE positions always uniform i.i.d. over the square.
Layout place_network(const NetworkConfig& config, std::mt19937_64& eng);

}  // namespace cfmimo

#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "camobo/rng.hpp"

namespace camobo {

/// First `count` points of the Sobol sequence in [0,1)^dims, one per row.
/// The origin (index 0) is skipped.
Eigen::MatrixXd sobol_points(std::size_t dims, std::size_t count);

/// Sobol points with a Cranley-Patterson rotation drawn from `rng`
/// (each coordinate shifted by a uniform offset, modulo 1).
Eigen::MatrixXd shifted_sobol_points(std::size_t dims, std::size_t count, Rng& rng);

}  // namespace camobo

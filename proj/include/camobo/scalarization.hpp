#pragma once

#include <vector>

#include <Eigen/Core>

#include "camobo/rng.hpp"

namespace camobo {

/// Chebyshev weights theta: non-negative, summing to one.
class WeightVector {
 public:
  /// Throws std::invalid_argument if a component is negative/non-finite or
  /// the components do not sum to 1 within 1e-9.
  explicit WeightVector(Eigen::VectorXd theta);

  const Eigen::VectorXd& values() const { return theta_; }
  Eigen::Index size() const { return theta_.size(); }
  double operator[](Eigen::Index m) const { return theta_(m); }

 private:
  Eigen::VectorXd theta_;
};

/// Reference point R of the Chebyshev scalarisation, in normalized
/// objective units.
struct ReferencePoint {
  Eigen::VectorXd values;

  /// (-0.01, ..., -0.01): just below the [0,1] normalized objective range.
  static ReferencePoint standard(Eigen::Index m) { return {Eigen::VectorXd::Constant(m, -0.01)}; }
};

/// min_m theta_m * (y_m - R_m).
double chebyshev(const Eigen::VectorXd& y, const Eigen::VectorXd& theta, const Eigen::VectorXd& reference);
double chebyshev(const Eigen::VectorXd& y, const WeightVector& theta, const ReferencePoint& reference);

/// Uniform draw from the (M-1)-simplex via normalized unit exponentials.
WeightVector sample_theta(Rng& rng, Eigen::Index m);

/// Weights (s, 1-s) for s = 0, step, 2 step, ..., 1.
std::vector<WeightVector> theta_grid_2d(double step);

/// For each front point: true iff some theta in the grid makes it the
/// unique maximiser of the Chebyshev scalarisation over the front.
/// Throws std::invalid_argument if two front points dominate one another.
std::vector<bool> verify_front_recovery(const std::vector<Eigen::VectorXd>& front, const ReferencePoint& reference,
                                      const std::vector<WeightVector>& theta_grid);

}  // namespace camobo

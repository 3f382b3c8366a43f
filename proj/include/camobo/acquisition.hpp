#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "camobo/cost_model.hpp"
#include "camobo/gp.hpp"
#include "camobo/rng.hpp"
#include "camobo/scalarization.hpp"

namespace camobo {

/// beta_t = 2 ln(t^2 |X| / sqrt(2 pi)), floored at zero.
double beta(double t, double cardinality);

/// Everything the acquisition needs at one iteration. `cost` absent means
/// the cost-unaware MO-UCB baseline (C = 0).
struct AcquisitionContext {
  std::vector<const Surrogate*> models;
  std::size_t n_dims = 0;
  WeightVector theta;
  ReferencePoint reference;
  int t = 1;
  std::size_t candidate_count = 2000;
  int refine_steps = 20;
  std::optional<CostModel> cost;

  double beta_t() const { return beta(t, static_cast<double>(candidate_count)); }
  /// Throws std::invalid_argument on inconsistent sizes or t < 1.
  void validate() const;
};

struct AcquisitionValue {
  double alpha = 0.0;
  double q = 0.0;
  double c = 0.0;
};

/// Q(x) = min_m theta_m (mu_m(x) + sqrt(beta_t) sigma_m(x) - R_m).
double scalarized_ucb(const Eigen::VectorXd& x, const AcquisitionContext& ctx);

/// alpha = Q (1 - C), with C = 0 when no cost model is attached.
AcquisitionValue ca_acquisition(const Eigen::VectorXd& x, const AcquisitionContext& ctx);

/// Vectorized ca_acquisition over the rows of `points`.
std::vector<AcquisitionValue> ca_acquisition_batch(const Eigen::MatrixXd& points, const AcquisitionContext& ctx);

struct Selection {
  Eigen::VectorXd x;
  AcquisitionValue value;
  /// Best value among the raw candidates, before refinement.
  double candidate_alpha = 0.0;
  std::size_t candidate_index = 0;
};

/// Scores `candidate_count` shifted-Sobol candidates, keeps the first best
/// one (ties go to the earlier candidate), then runs one sweep of
/// golden-section search along each coordinate, accepting only strict
/// improvements. Throws NumericalFailure if no candidate is finite.
Selection maximize_acquisition(const AcquisitionContext& ctx, Rng& rng);

/// Same as above over an explicit candidate set (one point per row).
Selection maximize_acquisition(const AcquisitionContext& ctx, const Eigen::MatrixXd& candidates);

}  // namespace camobo

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "camobo/rng.hpp"

namespace camobo {

/// Ordered tuple I of distinct search-space dimensions, most expensive
/// first. Indices are stored zero-based.
class CostConstraint {
 public:
  /// Throws std::invalid_argument on an empty tuple, a repeated index or an
  /// index outside [0, n_dims).
  CostConstraint(std::vector<std::size_t> indices, std::size_t n_dims);

  /// Builds from one-based indices as written in configuration files.
  static CostConstraint from_one_based(const std::vector<std::size_t>& indices, std::size_t n_dims);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  std::size_t n_dims() const { return n_dims_; }

 private:
  std::vector<std::size_t> indices_;
  std::size_t n_dims_;
};

/// How sorted Dirichlet weights are attached to the ordered constraint.
///  - PaperLiteral: the most expensive dimension gets the largest weight.
///  - BehaviorMatching: the most expensive dimension gets the smallest
///    weight, hence the largest rate and the steepest penalty.
enum class AssignmentPolicy { PaperLiteral, BehaviorMatching };

std::string to_string(AssignmentPolicy policy);
AssignmentPolicy parse_policy(const std::string& text);

/// Positive weights summing to one; w[j] belongs to I(j).
class CostWeights {
 public:
  /// Validates positivity, unit sum and the ordering implied by `policy`.
  CostWeights(Eigen::VectorXd w, AssignmentPolicy policy);

  const Eigen::VectorXd& values() const { return w_; }
  AssignmentPolicy policy() const { return policy_; }
  std::size_t size() const { return static_cast<std::size_t>(w_.size()); }

 private:
  Eigen::VectorXd w_;
  AssignmentPolicy policy_;
};

/// Flat Dirichlet draw of k weights, sorted and assigned per policy.
CostWeights sample_weights(Rng& rng, std::size_t k, AssignmentPolicy policy);

/// 1 / (w t + 1).
double lambda_of(double weight, double t);

/// Exponential density lambda * exp(-lambda * x).
double pi_density(double x, double lambda);

/// C(x, t) = prod_j (1 - pi(x_{I(j)}, lambda(w_j, t))). Coordinates are
/// clamped to [0,1] first; dimensions outside I are ignored.
double cost(const Eigen::VectorXd& x, double t, const CostConstraint& constraint, const CostWeights& weights);

/// Bundles a constraint with its weights, fixed for a whole run.
class CostModel {
 public:
  CostModel(CostConstraint constraint, CostWeights weights);

  double operator()(const Eigen::VectorXd& x, double t) const { return cost(x, t, constraint_, weights_); }

  const CostConstraint& constraint() const { return constraint_; }
  const CostWeights& weights() const { return weights_; }

 private:
  CostConstraint constraint_;
  CostWeights weights_;
};

}  // namespace camobo

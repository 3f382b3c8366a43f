#include "camobo/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace camobo {

CostConstraint::CostConstraint(std::vector<std::size_t> indices, std::size_t n_dims)
    : indices_(std::move(indices)), n_dims_(n_dims) {
  if (indices_.empty()) throw std::invalid_argument("CostConstraint: at least one dimension required");
  if (indices_.size() > n_dims_) throw std::invalid_argument("CostConstraint: more indices than dimensions");
  std::vector<bool> seen(n_dims_, false);
  for (std::size_t i : indices_) {
    if (i >= n_dims_)
      throw std::invalid_argument("CostConstraint: dimension " + std::to_string(i + 1) + " outside 1.." +
                                  std::to_string(n_dims_));
    if (seen[i]) throw std::invalid_argument("CostConstraint: dimension " + std::to_string(i + 1) + " repeated");
    seen[i] = true;
  }
}

CostConstraint CostConstraint::from_one_based(const std::vector<std::size_t>& indices, std::size_t n_dims) {
  std::vector<std::size_t> zero_based;
  zero_based.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i == 0) throw std::invalid_argument("CostConstraint: indices are one-based, got 0");
    zero_based.push_back(i - 1);
  }
  return CostConstraint(std::move(zero_based), n_dims);
}

std::string to_string(AssignmentPolicy policy) {
  return policy == AssignmentPolicy::PaperLiteral ? "paper-literal" : "behavior-matching";
}

AssignmentPolicy parse_policy(const std::string& text) {
  if (text == "paper-literal" || text == "paper_literal") return AssignmentPolicy::PaperLiteral;
  if (text == "behavior-matching" || text == "behavior_matching") return AssignmentPolicy::BehaviorMatching;
  throw std::invalid_argument("unknown cost policy '" + text + "' (expected paper-literal or behavior-matching)");
}

CostWeights::CostWeights(Eigen::VectorXd w, AssignmentPolicy policy) : w_(std::move(w)), policy_(policy) {
  if (w_.size() == 0) throw std::invalid_argument("CostWeights: empty");
  if (!w_.allFinite() || (w_.array() <= 0.0).any()) throw std::invalid_argument("CostWeights: weights must be > 0");
  if (std::abs(w_.sum() - 1.0) > 1e-9) throw std::invalid_argument("CostWeights: weights must sum to 1");
  for (Eigen::Index j = 0; j + 1 < w_.size(); ++j) {
    const bool ordered = policy_ == AssignmentPolicy::PaperLiteral ? w_(j) > w_(j + 1) : w_(j) < w_(j + 1);
    if (!ordered) throw std::invalid_argument("CostWeights: ordering violates policy " + to_string(policy_));
  }
}

CostWeights sample_weights(Rng& rng, std::size_t k, AssignmentPolicy policy) {
  if (k == 0) throw std::invalid_argument("sample_weights: k must be >= 1");
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> draw(k);
  for (double& d : draw) d = expo(rng);
  if (policy == AssignmentPolicy::PaperLiteral)
    std::sort(draw.begin(), draw.end(), std::greater<>());
  else
    std::sort(draw.begin(), draw.end());
  Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(draw.data(), static_cast<Eigen::Index>(k));
  w /= w.sum();
  return CostWeights(std::move(w), policy);
}

double lambda_of(double weight, double t) { return 1.0 / (weight * t + 1.0); }

double pi_density(double x, double lambda) { return lambda * std::exp(-lambda * x); }

double cost(const Eigen::VectorXd& x, double t, const CostConstraint& constraint, const CostWeights& weights) {
  if (constraint.size() != weights.size()) throw std::invalid_argument("cost: constraint/weights length mismatch");
  if (static_cast<std::size_t>(x.size()) != constraint.n_dims())
    throw std::invalid_argument("cost: x has " + std::to_string(x.size()) + " dims, constraint expects " +
                                std::to_string(constraint.n_dims()));
  double c = 1.0;
  for (std::size_t j = 0; j < constraint.size(); ++j) {
    const double xj = std::clamp(x(static_cast<Eigen::Index>(constraint.indices()[j])), 0.0, 1.0);
    c *= 1.0 - pi_density(xj, lambda_of(weights.values()(static_cast<Eigen::Index>(j)), t));
  }
  return c;
}

CostModel::CostModel(CostConstraint constraint, CostWeights weights)
    : constraint_(std::move(constraint)), weights_(std::move(weights)) {
  if (constraint_.size() != weights_.size())
    throw std::invalid_argument("CostModel: constraint has " + std::to_string(constraint_.size()) +
                                " dimensions but " + std::to_string(weights_.size()) + " weights");
}

}  // namespace camobo

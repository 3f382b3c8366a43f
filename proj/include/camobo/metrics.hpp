#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "camobo/cost_model.hpp"
#include "camobo/rng.hpp"
#include "camobo/scalarization.hpp"

namespace camobo {

/// y dominates y2 (maximisation): y != y2 and y_i >= y2_i for every i.
bool dominates(const Eigen::VectorXd& y, const Eigen::VectorXd& y2);

/// Indices (ascending) of points not dominated by any other point.
/// Duplicate objective vectors are all kept.
std::vector<std::size_t> pareto_filter(const std::vector<Eigen::VectorXd>& ys);

/// Exact dominated area for M = 2 by sort-and-sweep. Every point must be
/// >= ref componentwise, otherwise std::invalid_argument.
double hypervolume_2d(const std::vector<Eigen::VectorXd>& front, const Eigen::VectorXd& ref);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo dominated hypervolume for any M, sampling uniformly in the
/// box [ref, componentwise max of front].
MonteCarloEstimate hypervolume_mc(const std::vector<Eigen::VectorXd>& front, const Eigen::VectorXd& ref,
                                  std::size_t samples, Rng& rng);

/// Observations together with the current dominant subset.
class ParetoArchive {
 public:
  void add(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

  std::size_t size() const { return xs_.size(); }
  const std::vector<Eigen::VectorXd>& inputs() const { return xs_; }
  const std::vector<Eigen::VectorXd>& outputs() const { return ys_; }
  /// Indices of the dominant entries, ascending.
  const std::vector<std::size_t>& dominant() const { return dominant_; }
  std::vector<Eigen::VectorXd> front() const;

  /// Exact in 2-D, Monte Carlo (fixed seed, 10^5 samples) otherwise.
  double hypervolume(const Eigen::VectorXd& ref) const;

 private:
  std::vector<Eigen::VectorXd> xs_;
  std::vector<Eigen::VectorXd> ys_;
  std::vector<std::size_t> dominant_;
};

/// Finite stand-in for the search space when taking the max in the regret:
/// grid points with their true normalized objective vectors.
struct RegretOracle {
  Eigen::MatrixXd points;      // one point per row, normalized inputs
  Eigen::MatrixXd objectives;  // one M-vector per row, normalized objectives
};

/// max over (grid U {x_t}) of S(f(x)) (1 - C(x,t)) minus the same at x_t.
/// `cost` null means C = 0.
double instantaneous_regret(const RegretOracle& oracle, const WeightVector& theta, const ReferencePoint& reference,
                            int t, const Eigen::VectorXd& x_t, const Eigen::VectorXd& f_t, const CostModel* cost);

struct RegretEntry {
  double instantaneous = 0.0;
  double cumulative = 0.0;
  double average = 0.0;
};

class RegretLedger {
 public:
  /// Appends r_t. A negative or non-finite value is a bug upstream and
  /// raises std::logic_error.
  const RegretEntry& record(double r);

  const std::vector<RegretEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<RegretEntry> entries_;
};

/// Componentwise sum of the selected inputs.
Eigen::VectorXd usage_sums(const std::vector<Eigen::VectorXd>& selected, Eigen::Index n_dims);

}  // namespace camobo

#include "camobo/objective.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

#include "camobo/errors.hpp"
#include "camobo/sequence.hpp"

namespace camobo {

namespace {

bool in_unit_cube(const Eigen::VectorXd& x) { return (x.array() >= 0.0).all() && (x.array() <= 1.0).all(); }

Eigen::VectorXd clamp_with_warning(const Eigen::VectorXd& x) {
  if (in_unit_cube(x)) return x;
  std::cerr << "warning: query point outside [0,1]^N clamped\n";
  return x.cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace

Eigen::VectorXd BenchmarkObjective::evaluate_raw(const Eigen::VectorXd& unit_x) {
  if (static_cast<std::size_t>(unit_x.size()) != n_dims())
    throw std::invalid_argument(problem_->name + ": expected " + std::to_string(n_dims()) + " inputs");
  return problem_->evaluate_raw(problem_->to_raw(clamp_with_warning(unit_x)));
}

Eigen::MatrixXd BenchmarkObjective::normalize_all(const Eigen::MatrixXd& raw_y) const {
  Eigen::MatrixXd out(raw_y.rows(), raw_y.cols());
  for (Eigen::Index i = 0; i < raw_y.rows(); ++i)
    out.row(i) = normalize(problem_->normalization, raw_y.row(i).transpose()).transpose();
  return out;
}

std::optional<RegretOracle> BenchmarkObjective::regret_oracle(std::size_t grid_size) const {
  RegretOracle oracle;
  oracle.points = sobol_points(n_dims(), grid_size);
  oracle.objectives.resize(oracle.points.rows(), static_cast<Eigen::Index>(n_objectives()));
  for (Eigen::Index i = 0; i < oracle.points.rows(); ++i)
    oracle.objectives.row(i) = problem_->evaluate_normalized(oracle.points.row(i).transpose()).transpose();
  return oracle;
}

ExternalObjective::ExternalObjective(Spec spec) : spec_(std::move(spec)) {
  if (spec_.raw_bounds.empty()) throw std::invalid_argument("external objective: search bounds required");
  start();
  if (!spec_.senses.empty() && spec_.senses.size() != n_objectives_)
    throw EvaluationFailure("external objective: child declared " + std::to_string(n_objectives_) +
                            " objectives but config lists " + std::to_string(spec_.senses.size()) + " senses");
  if (spec_.senses.empty()) spec_.senses.assign(n_objectives_, Sense::Minimize);
}

ExternalObjective::~ExternalObjective() = default;

void ExternalObjective::start() {
  process_ = std::make_unique<ExternalProcess>(spec_.command);
  const std::size_t declared = process_->handshake(n_dims(), ExternalProcess::Seconds(spec_.timeout_seconds));
  if (n_objectives_ != 0 && declared != n_objectives_)
    throw EvaluationFailure("external objective: restarted child changed its objective count");
  n_objectives_ = declared;
}

void ExternalObjective::recover() {
  process_.reset();
  start();
}

int ExternalObjective::shutdown() { return process_ ? process_->shutdown() : -1; }

Eigen::VectorXd ExternalObjective::to_raw(const Eigen::VectorXd& unit_x) const {
  Eigen::VectorXd raw(unit_x.size());
  for (Eigen::Index i = 0; i < unit_x.size(); ++i) {
    const Bounds& b = spec_.raw_bounds[static_cast<std::size_t>(i)];
    raw(i) = b.lo + std::clamp(unit_x(i), 0.0, 1.0) * (b.hi - b.lo);
  }
  return raw;
}

Eigen::VectorXd ExternalObjective::evaluate_raw(const Eigen::VectorXd& unit_x) {
  if (static_cast<std::size_t>(unit_x.size()) != n_dims())
    throw std::invalid_argument("external objective: expected " + std::to_string(n_dims()) + " inputs");
  if (!process_ || !process_->running()) throw EvaluationFailure("external objective: child is not running");
  return process_->evaluate(to_raw(clamp_with_warning(unit_x)), ExternalProcess::Seconds(spec_.timeout_seconds));
}

Eigen::MatrixXd ExternalObjective::normalize_all(const Eigen::MatrixXd& raw_y) const {
  Eigen::MatrixXd out(raw_y.rows(), raw_y.cols());
  for (Eigen::Index k = 0; k < raw_y.cols(); ++k) {
    Eigen::VectorXd col = raw_y.col(k);
    if (spec_.senses[static_cast<std::size_t>(k)] == Sense::Minimize) col = -col;
    const double lo = col.minCoeff(), hi = col.maxCoeff();
    if (hi > lo)
      out.col(k) = (col.array() - lo) / (hi - lo);
    else
      out.col(k).setConstant(0.5);
  }
  return out;
}

}  // namespace camobo

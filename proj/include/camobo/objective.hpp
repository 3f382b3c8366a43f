#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "camobo/benchmarks.hpp"
#include "camobo/external_objective.hpp"
#include "camobo/metrics.hpp"

namespace camobo {

/// The black box being optimized, seen through the normalized [0,1]^N
/// search space.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t n_dims() const = 0;
  virtual std::size_t n_objectives() const = 0;

  /// Unit-cube point -> raw search-space point.
  virtual Eigen::VectorXd to_raw(const Eigen::VectorXd& unit_x) const = 0;

  /// Raw objective values at a unit-cube point (already clamped).
  /// Throws EvaluationFailure when the evaluation cannot complete.
  virtual Eigen::VectorXd evaluate_raw(const Eigen::VectorXd& unit_x) = 0;

  /// Maps every raw observation (one per row) into [0,1]^M, maximisation
  /// sense. Benchmarks use fixed grid bounds; other objectives may depend
  /// on the data seen so far.
  virtual Eigen::MatrixXd normalize_all(const Eigen::MatrixXd& raw_y) const = 0;

  /// True objective values over a grid, when the objective is cheap enough
  /// to enumerate. std::nullopt disables regret tracking.
  virtual std::optional<RegretOracle> regret_oracle(std::size_t /*grid_size*/) const { return std::nullopt; }

  /// Called after an evaluation failure, before the single retry.
  virtual void recover() {}
};

class BenchmarkObjective : public Objective {
 public:
  explicit BenchmarkObjective(std::shared_ptr<const BenchmarkProblem> problem) : problem_(std::move(problem)) {}

  std::size_t n_dims() const override { return problem_->n_dims; }
  std::size_t n_objectives() const override { return problem_->n_objectives; }
  Eigen::VectorXd to_raw(const Eigen::VectorXd& unit_x) const override { return problem_->to_raw(unit_x); }
  Eigen::VectorXd evaluate_raw(const Eigen::VectorXd& unit_x) override;
  Eigen::MatrixXd normalize_all(const Eigen::MatrixXd& raw_y) const override;
  std::optional<RegretOracle> regret_oracle(std::size_t grid_size) const override;

  const BenchmarkProblem& problem() const { return *problem_; }

 private:
  std::shared_ptr<const BenchmarkProblem> problem_;
};

/// A child process speaking the JSON-lines protocol. Objectives are
/// normalized with running min/max bounds over the observations so far.
class ExternalObjective : public Objective {
 public:
  struct Spec {
    std::vector<std::string> command;
    std::vector<Bounds> raw_bounds;
    std::vector<Sense> senses;
    double timeout_seconds = 600.0;
  };

  /// Launches the child and completes the handshake.
  explicit ExternalObjective(Spec spec);
  ~ExternalObjective() override;

  std::size_t n_dims() const override { return spec_.raw_bounds.size(); }
  std::size_t n_objectives() const override { return n_objectives_; }
  Eigen::VectorXd to_raw(const Eigen::VectorXd& unit_x) const override;
  Eigen::VectorXd evaluate_raw(const Eigen::VectorXd& unit_x) override;
  Eigen::MatrixXd normalize_all(const Eigen::MatrixXd& raw_y) const override;
  void recover() override;

  /// Sends shutdown and returns the child's exit status.
  int shutdown();

 private:
  void start();

  Spec spec_;
  std::unique_ptr<ExternalProcess> process_;
  std::size_t n_objectives_ = 0;
};

}  // namespace camobo

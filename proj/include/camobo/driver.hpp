#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "camobo/cost_model.hpp"
#include "camobo/gp.hpp"
#include "camobo/objective.hpp"

namespace camobo {

enum class Mode { CaMobo, MoUcb };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct RunConfig {
  std::string problem;  // benchmark name or "external"
  int iterations = 0;   // T
  int n_init = 5;
  std::uint64_t seed = 0;
  Mode mode = Mode::CaMobo;
  /// One-based, most expensive first. Empty means (1, ..., N).
  std::vector<std::size_t> cost_constraint;
  AssignmentPolicy policy = AssignmentPolicy::BehaviorMatching;
  std::size_t candidate_count = 2000;
  int refine_steps = 20;
  int hyper_refit_period = 10;
  int repeats = 1;
  int workers = 1;
  bool standard_forms = false;
  std::size_t oracle_grid_size = 10000;
  /// Keeps ca_mobo mode but forces C = 0 everywhere (baseline check).
  bool cost_force_zero = false;
  std::optional<ExternalObjective::Spec> external;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct Observation {
  Eigen::VectorXd x;       // unit cube
  Eigen::VectorXd y_raw;
  Eigen::VectorXd y_norm;  // normalization at the end of the run
};

struct IterationRecord {
  int t = 0;
  Eigen::VectorXd x;      // unit cube
  Eigen::VectorXd x_raw;
  Eigen::VectorXd y_raw;
  Eigen::VectorXd y_norm;
  Eigen::VectorXd theta;
  double q = 0.0;
  double c = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  /// C at the centre of the cube for this t (0 when cost is off).
  double cost_probe = 0.0;
  std::optional<double> regret;
  std::optional<double> cumulative_regret;
  std::optional<double> average_regret;
  double hypervolume = 0.0;
};

struct RunTrace {
  std::uint64_t seed = 0;
  std::size_t n_dims = 0;
  std::size_t n_objectives = 0;
  std::vector<Observation> observations;  // initial design first, then x_1..x_T
  std::vector<IterationRecord> records;
  std::optional<Eigen::VectorXd> cost_weights;  // only in ca_mobo mode
  std::vector<std::size_t> dominant;             // indices into observations
  std::vector<KernelHyper> final_hypers;
  Eigen::VectorXd usage_sums;
  double final_hypervolume = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

/// Thrown when the run cannot continue; carries everything logged so far.
class RunAborted : public std::runtime_error {
 public:
  RunAborted(const std::string& what, RunTrace partial) : std::runtime_error(what), partial_(std::move(partial)) {}
  const RunTrace& partial() const { return partial_; }

 private:
  RunTrace partial_;
};

using ObjectiveFactory = std::function<std::unique_ptr<Objective>(const RunConfig&)>;

/// Default factory: named benchmark (normalization fitted once per
/// process and shared) or an external child per run.
std::unique_ptr<Objective> make_objective(const RunConfig& config);

/// Evaluates at a unit-cube point with a single retry after recover().
/// Throws EvaluationFailure if the retry fails too.
Eigen::VectorXd evaluate_objective(Objective& objective, const Eigen::VectorXd& unit_x);

/// One optimization run, fully determined by the config and its seed.
RunTrace run(const RunConfig& config, Objective& objective);
RunTrace run(const RunConfig& config, const ObjectiveFactory& factory = make_objective);

struct Quantiles {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

Quantiles quantiles(std::vector<double> values);

struct AggregateRow {
  int t = 0;
  Quantiles hypervolume;
  std::optional<Quantiles> average_regret;
  std::vector<Quantiles> usage_sums;  // cumulative sum of x_{s,i} for s <= t
};

struct RepeatFailure {
  std::uint64_t seed = 0;
  std::string message;
};

struct RepeatsResult {
  std::vector<RunTrace> traces;  // successful runs, in seed order
  std::vector<RepeatFailure> failures;
  std::vector<AggregateRow> aggregate;
};

/// Runs seeds seed, seed+1, ..., seed+repeats-1 on up to `config.workers`
/// threads and aggregates per-iteration statistics. Throws
/// std::runtime_error if fewer than half of the runs succeed.
RepeatsResult run_repeats(const RunConfig& config, const ObjectiveFactory& factory = make_objective);

std::vector<AggregateRow> aggregate_traces(const std::vector<RunTrace>& traces);

}  // namespace camobo

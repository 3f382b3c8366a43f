#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace camobo {

enum class Sense { Minimize, Maximize };

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
};

/// Per-objective affine map from raw values into [0,1] (maximisation),
/// fitted on a reference grid.
struct ObjectiveNormalization {
  std::vector<Sense> senses;
  Eigen::VectorXd lo;  // min of the sense-adjusted objective over the grid
  Eigen::VectorXd hi;  // max of the sense-adjusted objective over the grid
};

/// A synthetic problem on a raw box, with its normalization fitted.
struct BenchmarkProblem {
  std::string name;
  std::size_t n_dims = 0;
  std::size_t n_objectives = 0;
  std::vector<Bounds> raw_bounds;
  std::vector<Sense> senses;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> evaluate_raw;
  ObjectiveNormalization normalization;

  /// [0,1]^N -> raw box (input clamped into [0,1] first).
  Eigen::VectorXd to_raw(const Eigen::VectorXd& unit_x) const;
  /// Raw box -> [0,1]^N.
  Eigen::VectorXd to_unit(const Eigen::VectorXd& raw_x) const;
  /// Normalized objectives at a point of the unit cube.
  Eigen::VectorXd evaluate_normalized(const Eigen::VectorXd& unit_x) const;
};

Eigen::Vector2d zdt3(const Eigen::VectorXd& x);
double cross_in_tray(const Eigen::Vector2d& x);
double holder_table(const Eigen::Vector2d& x);
double matyas(const Eigen::Vector2d& x);
double booth(const Eigen::Vector2d& x, bool standard_form = false);

/// Number of low-discrepancy points used to fit objective normalization.
inline constexpr std::size_t kNormalizationGridSize = 100000;

/// Fits min/max bounds of the sense-adjusted objectives over the Sobol
/// grid. Throws InvalidProblem if any objective is constant on the grid.
ObjectiveNormalization fit_normalization(const BenchmarkProblem& problem,
                                         std::size_t grid_size = kNormalizationGridSize);

/// Negate minimised objectives, min-max scale by the bounds, clamp to [0,1].
Eigen::VectorXd normalize(const ObjectiveNormalization& norm, const Eigen::VectorXd& raw_y);
/// Affine inverse of normalize for values inside the bounds.
Eigen::VectorXd denormalize(const ObjectiveNormalization& norm, const Eigen::VectorXd& unit_y);

/// Builds a named problem ("zdt3", "cross_holder", "matyas_booth") with
/// its normalization fitted. `standard_forms` swaps the printed
/// difference-of-squares Booth for the canonical sum of squares. Unknown names raise
/// std::invalid_argument.
BenchmarkProblem make_benchmark(const std::string& name, bool standard_forms = false,
                                std::size_t grid_size = kNormalizationGridSize);

std::vector<std::string> benchmark_names();

}  // namespace camobo

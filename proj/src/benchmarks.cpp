#include "camobo/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "camobo/errors.hpp"
#include "camobo/sequence.hpp"

namespace camobo {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kMaxExponent = 700.0;

double guarded_exp(double a) { return std::exp(std::min(a, kMaxExponent)); }
}  // namespace

Eigen::VectorXd BenchmarkProblem::to_raw(const Eigen::VectorXd& unit_x) const {
  if (static_cast<std::size_t>(unit_x.size()) != n_dims) throw std::invalid_argument(name + ": wrong input dimension");
  Eigen::VectorXd raw(unit_x.size());
  for (Eigen::Index i = 0; i < unit_x.size(); ++i) {
    const Bounds& b = raw_bounds[static_cast<std::size_t>(i)];
    raw(i) = b.lo + std::clamp(unit_x(i), 0.0, 1.0) * (b.hi - b.lo);
  }
  return raw;
}

Eigen::VectorXd BenchmarkProblem::to_unit(const Eigen::VectorXd& raw_x) const {
  Eigen::VectorXd unit(raw_x.size());
  for (Eigen::Index i = 0; i < raw_x.size(); ++i) {
    const Bounds& b = raw_bounds[static_cast<std::size_t>(i)];
    unit(i) = (raw_x(i) - b.lo) / (b.hi - b.lo);
  }
  return unit;
}

Eigen::VectorXd BenchmarkProblem::evaluate_normalized(const Eigen::VectorXd& unit_x) const {
  return normalize(normalization, evaluate_raw(to_raw(unit_x)));
}

Eigen::Vector2d zdt3(const Eigen::VectorXd& x) {
  const auto n = x.size();
  if (n < 2) throw std::invalid_argument("zdt3: need at least 2 inputs");
  const double f1 = x(0);
  const double g = 1.0 + 9.0 / static_cast<double>(n - 1) * x.tail(n - 1).sum();
  const double h = 1.0 - std::sqrt(f1 / g) - (f1 / g) * std::sin(10.0 * kPi * f1);
  return {f1, g * h};
}

double cross_in_tray(const Eigen::Vector2d& x) {
  const double r = std::hypot(x(0), x(1));
  const double inner = std::abs(std::sin(x(0)) * std::sin(x(1)) * guarded_exp(std::abs(100.0 - r / kPi))) + 1.0;
  return -1e-4 * std::pow(inner, 0.1);
}

double holder_table(const Eigen::Vector2d& x) {
  const double r = std::hypot(x(0), x(1));
  return -std::abs(std::sin(x(0)) * std::cos(x(1)) * guarded_exp(std::abs(1.0 - r / kPi)));
}

double matyas(const Eigen::Vector2d& x) {
  return 0.26 * (x(0) * x(0) + x(1) * x(1)) - 0.48 * x(0) * x(1);
}

double booth(const Eigen::Vector2d& x, bool standard_form) {
  const double a = x(0) + 2.0 * x(1) - 7.0;
  const double b = 2.0 * x(0) + x(1) - 5.0;
  return standard_form ? a * a + b * b : a * a - b * b;
}

ObjectiveNormalization fit_normalization(const BenchmarkProblem& problem, std::size_t grid_size) {
  const Eigen::MatrixXd grid = sobol_points(problem.n_dims, grid_size);
  const auto m = static_cast<Eigen::Index>(problem.n_objectives);
  ObjectiveNormalization norm;
  norm.senses = problem.senses;
  norm.lo = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
  norm.hi = Eigen::VectorXd::Constant(m, -std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    Eigen::VectorXd y = problem.evaluate_raw(problem.to_raw(grid.row(i).transpose()));
    for (Eigen::Index k = 0; k < m; ++k)
      if (problem.senses[static_cast<std::size_t>(k)] == Sense::Minimize) y(k) = -y(k);
    norm.lo = norm.lo.cwiseMin(y);
    norm.hi = norm.hi.cwiseMax(y);
  }
  for (Eigen::Index k = 0; k < m; ++k)
    if (!(norm.hi(k) > norm.lo(k)))
      throw InvalidProblem(problem.name + ": objective " + std::to_string(k + 1) +
                           " is constant on the normalization grid");
  return norm;
}

Eigen::VectorXd normalize(const ObjectiveNormalization& norm, const Eigen::VectorXd& raw_y) {
  if (raw_y.size() != norm.lo.size()) throw std::invalid_argument("normalize: objective count mismatch");
  Eigen::VectorXd out(raw_y.size());
  for (Eigen::Index k = 0; k < raw_y.size(); ++k) {
    const double v = norm.senses[static_cast<std::size_t>(k)] == Sense::Minimize ? -raw_y(k) : raw_y(k);
    out(k) = std::clamp((v - norm.lo(k)) / (norm.hi(k) - norm.lo(k)), 0.0, 1.0);
  }
  return out;
}

Eigen::VectorXd denormalize(const ObjectiveNormalization& norm, const Eigen::VectorXd& unit_y) {
  Eigen::VectorXd out(unit_y.size());
  for (Eigen::Index k = 0; k < unit_y.size(); ++k) {
    const double v = norm.lo(k) + unit_y(k) * (norm.hi(k) - norm.lo(k));
    out(k) = norm.senses[static_cast<std::size_t>(k)] == Sense::Minimize ? -v : v;
  }
  return out;
}

std::vector<std::string> benchmark_names() { return {"zdt3", "cross_holder", "matyas_booth"}; }

BenchmarkProblem make_benchmark(const std::string& name, bool standard_forms, std::size_t grid_size) {
  BenchmarkProblem p;
  p.name = name;
  p.n_objectives = 2;
  p.senses = {Sense::Minimize, Sense::Minimize};
  if (name == "zdt3") {
    p.n_dims = 5;
    p.raw_bounds.assign(5, Bounds{0.0, 1.0});
    p.evaluate_raw = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return zdt3(x); };
  } else if (name == "cross_holder") {
    p.n_dims = 2;
    p.raw_bounds.assign(2, Bounds{-10.0, 10.0});
    p.evaluate_raw = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const Eigen::Vector2d v = x.head<2>();
      return Eigen::Vector2d(cross_in_tray(v), holder_table(v));
    };
  } else if (name == "matyas_booth") {
    p.n_dims = 2;
    p.raw_bounds.assign(2, Bounds{-10.0, 10.0});
    p.evaluate_raw = [standard_forms](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const Eigen::Vector2d v = x.head<2>();
      return Eigen::Vector2d(matyas(v), booth(v, standard_forms));
    };
  } else {
    throw std::invalid_argument("unknown benchmark '" + name + "' (expected zdt3, cross_holder or matyas_booth)");
  }
  p.normalization = fit_normalization(p, grid_size);
  return p;
}

}  // namespace camobo

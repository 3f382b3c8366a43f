#include "camobo/scalarization.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "camobo/metrics.hpp"

namespace camobo {

WeightVector::WeightVector(Eigen::VectorXd theta) : theta_(std::move(theta)) {
  if (theta_.size() == 0) throw std::invalid_argument("WeightVector: empty");
  if (!theta_.allFinite() || (theta_.array() < 0.0).any())
    throw std::invalid_argument("WeightVector: components must be finite and non-negative");
  if (std::abs(theta_.sum() - 1.0) > 1e-9) throw std::invalid_argument("WeightVector: components must sum to 1");
}

double chebyshev(const Eigen::VectorXd& y, const Eigen::VectorXd& theta, const Eigen::VectorXd& reference) {
  if (y.size() != theta.size() || y.size() != reference.size())
    throw std::invalid_argument("chebyshev: dimension mismatch (y=" + std::to_string(y.size()) + ", theta=" +
                                std::to_string(theta.size()) + ", R=" + std::to_string(reference.size()) + ")");
  return (theta.array() * (y - reference).array()).minCoeff();
}

double chebyshev(const Eigen::VectorXd& y, const WeightVector& theta, const ReferencePoint& reference) {
  return chebyshev(y, theta.values(), reference.values);
}

WeightVector sample_theta(Rng& rng, Eigen::Index m) {
  if (m < 1) throw std::invalid_argument("sample_theta: need at least one objective");
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd draw(m);
  for (Eigen::Index i = 0; i < m; ++i) draw(i) = expo(rng);
  draw /= draw.sum();
  // Renormalization can leave the sum a few ulps off 1; the constructor
  // tolerance absorbs that.
  return WeightVector(std::move(draw));
}

std::vector<WeightVector> theta_grid_2d(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("theta_grid_2d: step must be in (0,1]");
  const int n = static_cast<int>(std::llround(1.0 / step));
  std::vector<WeightVector> grid;
  grid.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    grid.emplace_back(Eigen::Vector2d(s, 1.0 - s));
  }
  return grid;
}

std::vector<bool> verify_front_recovery(const std::vector<Eigen::VectorXd>& front, const ReferencePoint& reference,
                                      const std::vector<WeightVector>& theta_grid) {
  if (front.empty()) throw std::invalid_argument("verify_front_recovery: empty front");
  for (std::size_t i = 0; i < front.size(); ++i)
    for (std::size_t j = 0; j < front.size(); ++j)
      if (i != j && dominates(front[i], front[j]))
        throw std::invalid_argument("verify_front_recovery: front point " + std::to_string(i) + " dominates point " +
                                    std::to_string(j));

  std::vector<bool> recovered(front.size(), false);
  if (front.size() == 1) {
    recovered[0] = true;
    return recovered;
  }
  for (const WeightVector& theta : theta_grid) {
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    bool unique = false;
    for (std::size_t i = 0; i < front.size(); ++i) {
      const double v = chebyshev(front[i], theta, reference);
      if (v > best_value) {
        best = i;
        best_value = v;
        unique = true;
      } else if (v == best_value) {
        unique = false;
      }
    }
    if (unique) recovered[best] = true;
  }
  return recovered;
}

}  // namespace camobo

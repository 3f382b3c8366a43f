#include "camobo/sequence.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/random/sobol.hpp>

namespace camobo {

namespace {
using SobolEngine = boost::random::sobol_engine<std::uint32_t, 32>;
constexpr double kTwoPow32 = 4294967296.0;
}  // namespace

Eigen::MatrixXd sobol_points(std::size_t dims, std::size_t count) {
  if (dims == 0) throw std::invalid_argument("sobol_points: dims must be positive");
  // Boost's engine already starts after the all-zero point.
  SobolEngine engine(dims);
  Eigen::MatrixXd points(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dims));
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (Eigen::Index d = 0; d < points.cols(); ++d) points(i, d) = engine() / kTwoPow32;
  return points;
}

Eigen::MatrixXd shifted_sobol_points(std::size_t dims, std::size_t count, Rng& rng) {
  Eigen::MatrixXd points = sobol_points(dims, count);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index d = 0; d < points.cols(); ++d) {
    const double shift = unit(rng);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      double v = points(i, d) + shift;
      points(i, d) = v >= 1.0 ? v - 1.0 : v;
    }
  }
  return points;
}

}  // namespace camobo

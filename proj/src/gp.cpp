#include "camobo/gp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "camobo/errors.hpp"

namespace camobo {

bool KernelHyper::valid() const {
  return lengthscale > 0.0 && signal_variance > 0.0 && noise_variance >= 0.0 &&
         std::isfinite(lengthscale) && std::isfinite(signal_variance) && std::isfinite(noise_variance);
}

double se_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, const KernelHyper& hyper) {
  if (x.size() != x2.size())
    throw std::invalid_argument("se_kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                                std::to_string(x2.size()) + ")");
  const double sq = (x - x2).squaredNorm();
  return hyper.signal_variance * std::exp(-sq / (2.0 * hyper.lengthscale * hyper.lengthscale));
}

void Surrogate::predict_batch(const Eigen::MatrixXd& inputs, Eigen::VectorXd& mean,
                              Eigen::VectorXd& variance) const {
  mean.resize(inputs.rows());
  variance.resize(inputs.rows());
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    const Prediction p = predict(inputs.row(i).transpose());
    mean(i) = p.mean;
    variance(i) = p.variance;
  }
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& inputs, const KernelHyper& hyper) {
  const Eigen::Index n = inputs.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = hyper.signal_variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = se_kernel(inputs.row(i).transpose(), inputs.row(j).transpose(), hyper);
      k(j, i) = k(i, j);
    }
  }
  return k;
}

namespace {

struct Factorized {
  Eigen::MatrixXd lower;
  double diagonal = 0.0;
};

Factorized factorize(const Eigen::MatrixXd& inputs, const KernelHyper& hyper) {
  const Eigen::MatrixXd k = gram_matrix(inputs, hyper);
  for (double jitter = kJitterFloor; jitter <= kJitterMax * 1.0000001; jitter *= 10.0) {
    const double diagonal = std::max(hyper.noise_variance, jitter);
    Eigen::MatrixXd a = k;
    a.diagonal().array() += diagonal;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd lower = llt.matrixL();
    if (!lower.allFinite() || (lower.diagonal().array() <= 0.0).any()) continue;
    return {std::move(lower), diagonal};
  }
  throw NumericalFailure("GP fit: covariance matrix not positive definite even with jitter " +
                         std::to_string(kJitterMax) + " (n=" + std::to_string(inputs.rows()) + ")");
}

}  // namespace

GPModel GPModel::prior(const KernelHyper& hyper) {
  GPModel model;
  model.hyper_ = hyper;
  return model;
}

GPModel GPModel::fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const KernelHyper& hyper) {
  if (inputs.rows() == 0) throw std::invalid_argument("GP fit: empty dataset");
  if (inputs.rows() != targets.size()) throw std::invalid_argument("GP fit: inputs/targets size mismatch");
  if (!hyper.valid()) throw std::invalid_argument("GP fit: hyperparameters must be positive and finite");

  GPModel model;
  model.hyper_ = hyper;
  model.inputs_ = inputs;
  model.offset_ = targets.mean();
  Factorized f = factorize(inputs, hyper);
  model.factor_ = std::move(f.lower);
  model.diagonal_ = f.diagonal;
  const Eigen::VectorXd centred = targets.array() - model.offset_;
  const Eigen::VectorXd half = model.factor_.triangularView<Eigen::Lower>().solve(centred);
  model.alpha_ = model.factor_.transpose().triangularView<Eigen::Upper>().solve(half);
  return model;
}

Eigen::VectorXd GPModel::cross_covariance(const Eigen::VectorXd& x) const {
  if (x.size() != inputs_.cols())
    throw std::invalid_argument("GP predict: expected " + std::to_string(inputs_.cols()) + " dims, got " +
                                std::to_string(x.size()));
  Eigen::VectorXd k(inputs_.rows());
  for (Eigen::Index i = 0; i < inputs_.rows(); ++i) k(i) = se_kernel(x, inputs_.row(i).transpose(), hyper_);
  return k;
}

Prediction GPModel::predict(const Eigen::VectorXd& x) const {
  if (inputs_.rows() == 0) return {0.0, hyper_.signal_variance};
  const Eigen::VectorXd k = cross_covariance(x);
  const Eigen::VectorXd v = factor_.triangularView<Eigen::Lower>().solve(k);
  const double var = hyper_.signal_variance - v.squaredNorm();
  return {offset_ + k.dot(alpha_), std::max(var, 0.0)};
}

void GPModel::predict_batch(const Eigen::MatrixXd& inputs, Eigen::VectorXd& mean,
                            Eigen::VectorXd& variance) const {
  const Eigen::Index q = inputs.rows();
  if (inputs_.rows() == 0) {
    mean = Eigen::VectorXd::Zero(q);
    variance = Eigen::VectorXd::Constant(q, hyper_.signal_variance);
    return;
  }
  if (inputs.cols() != inputs_.cols()) throw std::invalid_argument("GP predict_batch: dimension mismatch");
  // Squared distances via |a|^2 + |b|^2 - 2ab, clamped against round-off.
  const Eigen::VectorXd qn = inputs.rowwise().squaredNorm();
  const Eigen::VectorXd tn = inputs_.rowwise().squaredNorm();
  Eigen::MatrixXd kx = -2.0 * (inputs_ * inputs.transpose());
  kx.colwise() += tn;
  kx.rowwise() += qn.transpose();
  const double scale = -1.0 / (2.0 * hyper_.lengthscale * hyper_.lengthscale);
  kx = (kx.array().max(0.0) * scale).exp() * hyper_.signal_variance;

  mean = (kx.transpose() * alpha_).array() + offset_;
  const Eigen::MatrixXd v = factor_.triangularView<Eigen::Lower>().solve(kx);
  variance = (hyper_.signal_variance - v.colwise().squaredNorm().transpose().array()).max(0.0);
}

double log_marginal_likelihood(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                               const KernelHyper& hyper) {
  if (inputs.rows() < 2) throw std::invalid_argument("log_marginal_likelihood: need at least 2 observations");
  const GPModel model = GPModel::fit(inputs, targets, hyper);
  const Eigen::VectorXd centred = targets.array() - model.target_offset();
  const double n = static_cast<double>(inputs.rows());
  return -0.5 * centred.dot(model.alpha()) - model.lower_factor().diagonal().array().log().sum() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

namespace {

// Search happens in log10 space over (lengthscale, signal, noise).
using LogPoint = std::array<double, 3>;

KernelHyper from_log(const LogPoint& p) {
  return {std::pow(10.0, p[0]), std::pow(10.0, p[1]), std::pow(10.0, p[2])};
}

LogPoint to_log(const KernelHyper& h) {
  return {std::log10(h.lengthscale), std::log10(h.signal_variance), std::log10(h.noise_variance)};
}

class LmlObjective {
 public:
  LmlObjective(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) : inputs_(inputs), targets_(targets) {}

  double operator()(const LogPoint& p) const {
    try {
      const double v = log_marginal_likelihood(inputs_, targets_, from_log(p));
      return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
    } catch (const NumericalFailure&) {
      return -std::numeric_limits<double>::infinity();
    }
  }

 private:
  const Eigen::MatrixXd& inputs_;
  const Eigen::VectorXd& targets_;
};

struct Scored {
  LogPoint point;
  double value;
};

Scored coordinate_descent(const LmlObjective& lml, Scored start, const LogPoint& lo, const LogPoint& hi) {
  double step = 0.5;
  int budget = 150;
  while (step > 0.01 && budget > 0) {
    bool improved = false;
    for (std::size_t c = 0; c < 3 && budget > 0; ++c) {
      for (double dir : {1.0, -1.0}) {
        LogPoint trial = start.point;
        trial[c] = std::clamp(trial[c] + dir * step, lo[c], hi[c]);
        if (trial[c] == start.point[c]) continue;
        const double v = lml(trial);
        --budget;
        if (v > start.value) {
          start = {trial, v};
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return start;
}

}  // namespace

KernelHyper optimize_hyperparameters(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, Rng& rng,
                                     const std::optional<KernelHyper>& previous, const HyperSearchBounds& bounds) {
  if (inputs.rows() < 2) throw std::invalid_argument("optimize_hyperparameters: need at least 2 observations");
  const LogPoint lo{std::log10(bounds.lengthscale_lo), std::log10(bounds.signal_lo), std::log10(bounds.noise_lo)};
  const LogPoint hi{std::log10(bounds.lengthscale_hi), std::log10(bounds.signal_hi), std::log10(bounds.noise_hi)};
  const LmlObjective lml(inputs, targets);

  constexpr std::array<int, 3> kGrid{6, 5, 5};
  std::vector<Scored> grid;
  for (int a = 0; a < kGrid[0]; ++a)
    for (int b = 0; b < kGrid[1]; ++b)
      for (int c = 0; c < kGrid[2]; ++c) {
        const LogPoint p{lo[0] + (hi[0] - lo[0]) * a / (kGrid[0] - 1), lo[1] + (hi[1] - lo[1]) * b / (kGrid[1] - 1),
                         lo[2] + (hi[2] - lo[2]) * c / (kGrid[2] - 1)};
        grid.push_back({p, lml(p)});
      }
  std::stable_sort(grid.begin(), grid.end(), [](const Scored& x, const Scored& y) { return x.value > y.value; });

  std::vector<Scored> starts{grid[0], grid[1]};
  if (previous && previous->valid()) {
    LogPoint p = to_log(*previous);
    for (std::size_t c = 0; c < 3; ++c) p[c] = std::clamp(p[c], lo[c], hi[c]);
    starts.push_back({p, lml(p)});
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (starts.size() < 5) {
    LogPoint p;
    for (std::size_t c = 0; c < 3; ++c) p[c] = lo[c] + (hi[c] - lo[c]) * unit(rng);
    starts.push_back({p, lml(p)});
  }

  Scored best{{}, -std::numeric_limits<double>::infinity()};
  for (const Scored& s : starts) {
    if (!std::isfinite(s.value)) continue;
    const Scored polished = coordinate_descent(lml, s, lo, hi);
    if (polished.value > best.value) best = polished;
  }
  if (!std::isfinite(best.value)) {
    std::cerr << "warning: hyperparameter search failed for every start; keeping previous values\n";
    return previous.value_or(KernelHyper{});
  }
  return from_log(best.point);
}

}  // namespace camobo

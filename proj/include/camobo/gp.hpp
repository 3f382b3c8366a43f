#pragma once

#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "camobo/rng.hpp"

namespace camobo {

/// Hyperparameters of the isotropic squared-exponential kernel plus
/// observation noise. All values are in normalized units.
struct KernelHyper {
  double lengthscale = 0.2;
  double signal_variance = 1.0;
  double noise_variance = 1e-6;

  /// Lengthscale and signal variance positive, noise non-negative (a zero
  /// noise is floored to the jitter at fit time), all finite.
  bool valid() const;
};

inline constexpr double kJitterFloor = 1e-8;
inline constexpr double kJitterMax = 1e-4;

/// sv * exp(-|x - x2|^2 / (2 l^2)). Throws std::invalid_argument on a
/// dimension mismatch.
double se_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, const KernelHyper& hyper);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Anything that can report a Gaussian predictive marginal at a point.
/// Acquisition functions only see this interface.
class Surrogate {
 public:
  virtual ~Surrogate() = default;
  virtual Prediction predict(const Eigen::VectorXd& x) const = 0;

  /// Row-wise prediction for a batch of inputs. The default loops over
  /// predict(); models override it when a vectorized path exists.
  virtual void predict_batch(const Eigen::MatrixXd& inputs, Eigen::VectorXd& mean,
                             Eigen::VectorXd& variance) const;
};

/// Exact GP regression for a single objective.
///
/// Targets are mean-centred before factorization and the offset is added
/// back on prediction, so the zero-mean prior applies to the residual.
/// The model is immutable once built; predictions are safe to call from
/// several threads at once.
class GPModel : public Surrogate {
 public:
  /// Prior-only model: mean 0 and variance signal_variance everywhere.
  static GPModel prior(const KernelHyper& hyper);

  /// Factorizes K + s I where s = max(noise_variance, jitter) and the
  /// jitter escalates 1e-8, 1e-7, ... 1e-4 until Cholesky succeeds.
  /// Throws std::invalid_argument for empty data and NumericalFailure if
  /// no jitter level works.
  static GPModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                     const KernelHyper& hyper);

  Prediction predict(const Eigen::VectorXd& x) const override;
  void predict_batch(const Eigen::MatrixXd& inputs, Eigen::VectorXd& mean,
                     Eigen::VectorXd& variance) const override;

  const KernelHyper& hyper() const { return hyper_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::MatrixXd& lower_factor() const { return factor_; }
  double target_offset() const { return offset_; }
  /// Diagonal term actually added to K (noise or escalated jitter).
  double diagonal_term() const { return diagonal_; }
  Eigen::Index size() const { return inputs_.rows(); }

 private:
  GPModel() = default;

  Eigen::VectorXd cross_covariance(const Eigen::VectorXd& x) const;

  KernelHyper hyper_;
  Eigen::MatrixXd inputs_;
  Eigen::MatrixXd factor_;
  Eigen::VectorXd alpha_;
  double offset_ = 0.0;
  double diagonal_ = 0.0;
};

/// Gram matrix K(X, X) without any diagonal term.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& inputs, const KernelHyper& hyper);

/// Log marginal likelihood of the centred targets. Requires at least two
/// observations.
double log_marginal_likelihood(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                               const KernelHyper& hyper);

struct HyperSearchBounds {
  double lengthscale_lo = 0.01, lengthscale_hi = 10.0;
  double signal_lo = 0.01, signal_hi = 100.0;
  double noise_lo = 1e-6, noise_hi = 1.0;
};

/// Derivative-free type-II maximum likelihood: a coarse log-grid seeds five
/// starts (two grid leaders, the previous hyperparameters if given, random
/// points for the rest), each polished by coordinate descent in log space. Falls back
/// to `previous` (or the defaults) when every start fails to factorize.
KernelHyper optimize_hyperparameters(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                     Rng& rng, const std::optional<KernelHyper>& previous = std::nullopt,
                                     const HyperSearchBounds& bounds = {});

}  // namespace camobo

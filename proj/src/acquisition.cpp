#include "camobo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "camobo/errors.hpp"
#include "camobo/sequence.hpp"

namespace camobo {

double beta(double t, double cardinality) {
  if (t < 1.0) throw std::invalid_argument("beta: t must be >= 1");
  if (cardinality < 1.0) throw std::invalid_argument("beta: cardinality must be positive");
  const double b = 2.0 * std::log(t * t * cardinality / std::sqrt(2.0 * std::numbers::pi));
  return std::max(b, 0.0);
}

void AcquisitionContext::validate() const {
  if (models.empty()) throw std::invalid_argument("AcquisitionContext: no surrogate models");
  if (theta.size() != static_cast<Eigen::Index>(models.size()) ||
      reference.values.size() != static_cast<Eigen::Index>(models.size()))
    throw std::invalid_argument("AcquisitionContext: theta/reference/model counts disagree");
  if (t < 1) throw std::invalid_argument("AcquisitionContext: t must be >= 1");
  if (n_dims < 1) throw std::invalid_argument("AcquisitionContext: n_dims must be >= 1");
  if (cost && cost->constraint().n_dims() != n_dims)
    throw std::invalid_argument("AcquisitionContext: cost constraint dimension disagrees with n_dims");
  if (candidate_count < 1) throw std::invalid_argument("AcquisitionContext: candidate_count must be >= 1");
  for (const Surrogate* m : models)
    if (m == nullptr) throw std::invalid_argument("AcquisitionContext: null model");
}

double scalarized_ucb(const Eigen::VectorXd& x, const AcquisitionContext& ctx) {
  const double root_beta = std::sqrt(ctx.beta_t());
  double q = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < ctx.models.size(); ++m) {
    const Prediction p = ctx.models[m]->predict(x);
    const auto i = static_cast<Eigen::Index>(m);
    const double ucb = p.mean + root_beta * std::sqrt(p.variance);
    q = std::min(q, ctx.theta[i] * (ucb - ctx.reference.values(i)));
  }
  return q;
}

AcquisitionValue ca_acquisition(const Eigen::VectorXd& x, const AcquisitionContext& ctx) {
  AcquisitionValue v;
  v.q = scalarized_ucb(x, ctx);
  if (ctx.cost) {
    v.c = (*ctx.cost)(x, ctx.t);
    v.alpha = v.q * (1.0 - v.c);
  } else {
    v.c = 0.0;
    v.alpha = v.q;
  }
  return v;
}

std::vector<AcquisitionValue> ca_acquisition_batch(const Eigen::MatrixXd& points, const AcquisitionContext& ctx) {
  const Eigen::Index n = points.rows();
  const double root_beta = std::sqrt(ctx.beta_t());
  Eigen::VectorXd q = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  Eigen::VectorXd mean, variance;
  for (std::size_t m = 0; m < ctx.models.size(); ++m) {
    ctx.models[m]->predict_batch(points, mean, variance);
    const auto i = static_cast<Eigen::Index>(m);
    const Eigen::ArrayXd term =
        ctx.theta[i] * ((mean.array() + root_beta * variance.array().sqrt()) - ctx.reference.values(i));
    q = q.array().min(term);
  }
  std::vector<AcquisitionValue> out(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) {
    AcquisitionValue& v = out[static_cast<std::size_t>(r)];
    v.q = q(r);
    if (ctx.cost) {
      v.c = (*ctx.cost)(points.row(r).transpose(), ctx.t);
      v.alpha = v.q * (1.0 - v.c);
    } else {
      v.alpha = v.q;
    }
  }
  return out;
}

namespace {

// Golden-section search for the maximum of alpha along coordinate `d`;
// returns the best point seen, never worse than `incumbent`.
void refine_coordinate(const AcquisitionContext& ctx, Eigen::Index d, int steps, Eigen::VectorXd& incumbent,
                       AcquisitionValue& best) {
  constexpr double kInvPhi = 0.6180339887498949;
  Eigen::VectorXd probe = incumbent;
  auto eval = [&](double s) {
    probe(d) = s;
    const AcquisitionValue v = ca_acquisition(probe, ctx);
    if (std::isfinite(v.alpha) && v.alpha > best.alpha) {
      best = v;
      incumbent = probe;
    }
    return std::isfinite(v.alpha) ? v.alpha : -std::numeric_limits<double>::infinity();
  };
  double lo = 0.0, hi = 1.0;
  double a = hi - kInvPhi * (hi - lo), b = lo + kInvPhi * (hi - lo);
  double fa = eval(a), fb = eval(b);
  for (int i = 0; i < steps; ++i) {
    if (fa >= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - kInvPhi * (hi - lo);
      fa = eval(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + kInvPhi * (hi - lo);
      fb = eval(b);
    }
  }
}

}  // namespace

Selection maximize_acquisition(const AcquisitionContext& ctx, const Eigen::MatrixXd& candidates) {
  ctx.validate();
  if (candidates.cols() != static_cast<Eigen::Index>(ctx.n_dims))
    throw std::invalid_argument("maximize_acquisition: candidate dimension disagrees with n_dims");
  if (candidates.rows() == 0) throw std::invalid_argument("maximize_acquisition: empty candidate set");
  const std::vector<AcquisitionValue> values = ca_acquisition_batch(candidates, ctx);

  std::optional<std::size_t> best_index;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].alpha)) continue;
    if (!best_index || values[i].alpha > values[*best_index].alpha) best_index = i;
  }
  if (!best_index) throw NumericalFailure("maximize_acquisition: acquisition is non-finite at every candidate");

  Selection sel;
  sel.candidate_index = *best_index;
  sel.x = candidates.row(static_cast<Eigen::Index>(*best_index)).transpose();
  // Rescore the incumbent through the scalar path so refinement compares
  // like with like.
  sel.value = ca_acquisition(sel.x, ctx);
  sel.candidate_alpha = sel.value.alpha;
  if (ctx.refine_steps > 0)
    for (Eigen::Index d = 0; d < sel.x.size(); ++d) refine_coordinate(ctx, d, ctx.refine_steps, sel.x, sel.value);
  return sel;
}

Selection maximize_acquisition(const AcquisitionContext& ctx, Rng& rng) {
  ctx.validate();
  return maximize_acquisition(ctx, shifted_sobol_points(ctx.n_dims, ctx.candidate_count, rng));
}

}  // namespace camobo

#include "camobo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace camobo {

bool dominates(const Eigen::VectorXd& y, const Eigen::VectorXd& y2) {
  if (y.size() != y2.size()) throw std::invalid_argument("dominates: dimension mismatch");
  return (y.array() >= y2.array()).all() && (y.array() != y2.array()).any();
}

std::vector<std::size_t> pareto_filter(const std::vector<Eigen::VectorXd>& ys) {
  // Sort by first objective descending (ties: lexicographic descending) so
  // each point can only be dominated by one that precedes it.
  std::vector<std::size_t> order(ys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(ys[b].begin(), ys[b].end(), ys[a].begin(), ys[a].end());
  });
  std::vector<std::size_t> kept;
  std::vector<std::size_t> front;
  for (std::size_t idx : order) {
    bool dominated = false;
    for (std::size_t f : front)
      if (dominates(ys[f], ys[idx])) {
        dominated = true;
        break;
      }
    if (!dominated) {
      front.push_back(idx);
      kept.push_back(idx);
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

double hypervolume_2d(const std::vector<Eigen::VectorXd>& front, const Eigen::VectorXd& ref) {
  if (ref.size() != 2) throw std::invalid_argument("hypervolume_2d: reference must be 2-D");
  for (std::size_t i = 0; i < front.size(); ++i) {
    if (front[i].size() != 2) throw std::invalid_argument("hypervolume_2d: point " + std::to_string(i) + " is not 2-D");
    if ((front[i].array() < ref.array()).any())
      throw std::invalid_argument("hypervolume_2d: point " + std::to_string(i) + " does not dominate the reference");
  }
  std::vector<Eigen::VectorXd> pts;
  for (std::size_t i : pareto_filter(front)) pts.push_back(front[i]);
  // Descending in the first objective => ascending in the second.
  std::sort(pts.begin(), pts.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a(0) > b(0) || (a(0) == b(0) && a(1) < b(1));
  });
  double area = 0.0;
  double floor = ref(1);
  for (const Eigen::VectorXd& p : pts) {
    if (p(1) <= floor) continue;
    area += (p(0) - ref(0)) * (p(1) - floor);
    floor = p(1);
  }
  return area;
}

MonteCarloEstimate hypervolume_mc(const std::vector<Eigen::VectorXd>& front, const Eigen::VectorXd& ref,
                                  std::size_t samples, Rng& rng) {
  if (front.empty() || samples == 0) return {};
  Eigen::VectorXd upper = front.front();
  for (const Eigen::VectorXd& p : front) {
    if (p.size() != ref.size()) throw std::invalid_argument("hypervolume_mc: dimension mismatch");
    if ((p.array() < ref.array()).any()) throw std::invalid_argument("hypervolume_mc: point below reference");
    upper = upper.cwiseMax(p);
  }
  const double box = (upper - ref).prod();
  if (box <= 0.0) return {};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t hits = 0;
  Eigen::VectorXd s(ref.size());
  for (std::size_t i = 0; i < samples; ++i) {
    for (Eigen::Index d = 0; d < s.size(); ++d) s(d) = ref(d) + unit(rng) * (upper(d) - ref(d));
    for (const Eigen::VectorXd& p : front)
      if ((p.array() >= s.array()).all()) {
        ++hits;
        break;
      }
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * frac, box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

void ParetoArchive::add(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (!ys_.empty() && y.size() != ys_.front().size()) throw std::invalid_argument("ParetoArchive: objective size changed");
  const std::size_t idx = ys_.size();
  xs_.push_back(x);
  ys_.push_back(y);
  for (std::size_t d : dominant_)
    if (dominates(ys_[d], y)) return;
  std::erase_if(dominant_, [&](std::size_t d) { return dominates(y, ys_[d]); });
  dominant_.push_back(idx);
}

std::vector<Eigen::VectorXd> ParetoArchive::front() const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(dominant_.size());
  for (std::size_t d : dominant_) out.push_back(ys_[d]);
  return out;
}

double ParetoArchive::hypervolume(const Eigen::VectorXd& ref) const {
  const std::vector<Eigen::VectorXd> f = front();
  if (f.empty()) return 0.0;
  if (ref.size() == 2) return hypervolume_2d(f, ref);
  Rng rng(12345);
  return hypervolume_mc(f, ref, 100000, rng).value;
}

double instantaneous_regret(const RegretOracle& oracle, const WeightVector& theta, const ReferencePoint& reference,
                            int t, const Eigen::VectorXd& x_t, const Eigen::VectorXd& f_t, const CostModel* cost) {
  auto score = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& f) {
    const double s = chebyshev(f, theta, reference);
    return cost ? s * (1.0 - (*cost)(x, t)) : s;
  };
  const double at_xt = score(x_t, f_t);
  double best = at_xt;
  for (Eigen::Index i = 0; i < oracle.points.rows(); ++i)
    best = std::max(best, score(oracle.points.row(i).transpose(), oracle.objectives.row(i).transpose()));
  return best - at_xt;
}

const RegretEntry& RegretLedger::record(double r) {
  if (!std::isfinite(r) || r < 0.0)
    throw std::logic_error("RegretLedger: instantaneous regret must be finite and non-negative, got " +
                           std::to_string(r) + " at t=" + std::to_string(entries_.size() + 1));
  RegretEntry e;
  e.instantaneous = r;
  e.cumulative = (entries_.empty() ? 0.0 : entries_.back().cumulative) + r;
  e.average = e.cumulative / static_cast<double>(entries_.size() + 1);
  entries_.push_back(e);
  return entries_.back();
}

Eigen::VectorXd usage_sums(const std::vector<Eigen::VectorXd>& selected, Eigen::Index n_dims) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(n_dims);
  for (const Eigen::VectorXd& x : selected) {
    if (x.size() != n_dims) throw std::invalid_argument("usage_sums: dimension mismatch");
    sums += x;
  }
  return sums;
}

}  // namespace camobo

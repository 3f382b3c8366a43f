#include <doctest.h>

#include <algorithm>
#include <random>

#include "camobo/metrics.hpp"

using namespace camobo;

namespace {

std::vector<std::size_t> brute_force_front(const std::vector<Eigen::VectorXd>& ys) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < ys.size() && !dominated; ++j) {
      if (i == j) continue;
      bool ge = true, gt = false;
      for (Eigen::Index k = 0; k < ys[i].size(); ++k) {
        ge = ge && ys[j](k) >= ys[i](k);
        gt = gt || ys[j](k) > ys[i](k);
      }
      dominated = ge && gt;
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

std::vector<Eigen::VectorXd> random_points(Rng& rng, std::size_t n, Eigen::Index m, bool coarse) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> k(0, 4);
  std::vector<Eigen::VectorXd> ys;
  for (std::size_t i = 0; i < n; ++i)
    ys.push_back(Eigen::VectorXd::NullaryExpr(m, [&] { return coarse ? k(rng) / 4.0 : u(rng); }));
  return ys;
}

// Plain rejection sampling over the unit box.
double mc_area(const std::vector<Eigen::VectorXd>& front, std::size_t samples, Rng& rng, double& std_error) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double a = u(rng), b = u(rng);
    for (const auto& p : front)
      if (p(0) >= a && p(1) >= b) {
        ++hits;
        break;
      }
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  std_error = std::sqrt(p * (1 - p) / static_cast<double>(samples));
  return p;
}

}  // namespace

TEST_CASE("dominance examples") {
  CHECK(dominates(Eigen::Vector2d(2, 3), Eigen::Vector2d(1, 3)));
  CHECK_FALSE(dominates(Eigen::Vector2d(1, 3), Eigen::Vector2d(3, 1)));
  CHECK_FALSE(dominates(Eigen::Vector2d(1, 3), Eigen::Vector2d(1, 3)));
  CHECK_THROWS_AS(dominates(Eigen::Vector2d(1, 3), Eigen::Vector3d(1, 3, 0)), std::invalid_argument);
}

TEST_CASE("pareto filter examples") {
  std::vector<Eigen::VectorXd> ys{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(0.4, 0.4)};
  CHECK(pareto_filter(ys) == std::vector<std::size_t>{0, 1, 2});
  ys.push_back(Eigen::Vector2d(0.5, 0.5));
  CHECK(pareto_filter(ys) == std::vector<std::size_t>{0, 1, 3});
  ys.push_back(Eigen::Vector2d(0.5, 0.5));
  CHECK(pareto_filter(ys) == std::vector<std::size_t>{0, 1, 3, 4});
  CHECK(pareto_filter({}).empty());
}

TEST_CASE("pareto filter matches brute force and is order independent") {
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    const bool coarse = trial % 2 == 1;  // coarse grids produce many ties
    const std::vector<Eigen::VectorXd> ys = random_points(rng, 50, 2 + trial % 3, coarse);
    const std::vector<std::size_t> got = pareto_filter(ys);
    CHECK(got == brute_force_front(ys));

    std::vector<std::size_t> perm(ys.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Eigen::VectorXd> shuffled;
    for (std::size_t p : perm) shuffled.push_back(ys[p]);
    std::vector<std::size_t> mapped;
    for (std::size_t i : pareto_filter(shuffled)) mapped.push_back(perm[i]);
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == got);

    std::vector<Eigen::VectorXd> kept;
    for (std::size_t i : got) kept.push_back(ys[i]);
    CHECK(pareto_filter(kept).size() == kept.size());
  }
}

TEST_CASE("exact two-dimensional hypervolume") {
  const Eigen::Vector2d origin(0, 0);
  CHECK(hypervolume_2d({Eigen::Vector2d(1, 1)}, origin) == 1.0);
  const std::vector<Eigen::VectorXd> pair{Eigen::Vector2d(0.5, 1), Eigen::Vector2d(1, 0.5)};
  CHECK(hypervolume_2d(pair, origin) == doctest::Approx(0.75).epsilon(1e-15));
  Rng rng(1);
  double se = 0.0;
  CHECK(std::abs(mc_area(pair, 1000000, rng, se) - 0.75) < 1e-2);
  const std::vector<Eigen::VectorXd> doubled{Eigen::Vector2d(0.5, 1), Eigen::Vector2d(1, 0.5), Eigen::Vector2d(1, 0.5)};
  CHECK(hypervolume_2d(doubled, origin) == hypervolume_2d(pair, origin));
  CHECK(hypervolume_2d({}, origin) == 0.0);
  CHECK_THROWS_AS(hypervolume_2d({Eigen::Vector2d(-0.1, 0.5)}, origin), std::invalid_argument);
}

TEST_CASE("hypervolume agrees with Monte Carlo on random fronts") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<Eigen::VectorXd> pts = random_points(rng, 3 + trial, 2, false);
    double se = 0.0;
    const double estimate = mc_area(pts, 200000, rng, se);
    CHECK(std::abs(hypervolume_2d(pts, Eigen::Vector2d::Zero()) - estimate) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("library Monte Carlo estimator agrees with the exact value") {
  Rng rng(5);
  const std::vector<Eigen::VectorXd> pts = random_points(rng, 12, 2, false);
  const MonteCarloEstimate est = hypervolume_mc(pts, Eigen::Vector2d::Zero(), 200000, rng);
  CHECK(std::abs(est.value - hypervolume_2d(pts, Eigen::Vector2d::Zero())) <= 3.0 * est.std_error + 1e-12);
}

TEST_CASE("archive keeps the dominant set and a monotone hypervolume") {
  Rng rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ParetoArchive archive;
  std::vector<Eigen::VectorXd> ys;
  double last = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector2d y(u(rng), u(rng));
    ys.push_back(y);
    archive.add(Eigen::Vector3d(u(rng), u(rng), u(rng)), y);
    CHECK(archive.dominant() == brute_force_front(ys));
    const double hv = archive.hypervolume(Eigen::Vector2d::Zero());
    CHECK(hv >= last);
    last = hv;
  }
}

TEST_CASE("instantaneous regret on a toy problem") {
  RegretOracle oracle;
  oracle.points.resize(3, 1);
  oracle.points << 0.0, 0.5, 1.0;
  oracle.objectives.resize(3, 2);
  oracle.objectives << 0.0, 1.0, 0.5, 0.5, 1.0, 0.0;
  const WeightVector theta(Eigen::Vector2d(0.5, 0.5));
  const ReferencePoint r{Eigen::Vector2d(0, 0)};
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
  CHECK(instantaneous_regret(oracle, theta, r, 1, x0, Eigen::Vector2d(0, 1), nullptr) == doctest::Approx(0.25));
  const Eigen::VectorXd mid = Eigen::VectorXd::Constant(1, 0.5);
  CHECK(instantaneous_regret(oracle, theta, r, 1, mid, Eigen::Vector2d(0.5, 0.5), nullptr) == 0.0);

  const CostModel cost(CostConstraint::from_one_based({1}, 1), CostWeights(Eigen::VectorXd::Ones(1), AssignmentPolicy::PaperLiteral));
  for (int t = 1; t < 50; ++t) {
    const double r_t = instantaneous_regret(oracle, theta, r, t, Eigen::VectorXd::Constant(1, 0.9), Eigen::Vector2d(0.9, 0.1), &cost);
    CHECK(r_t >= 0.0);
  }
}

TEST_CASE("regret ledger arithmetic") {
  RegretLedger ledger;
  ledger.record(0.4);
  ledger.record(0.2);
  CHECK(ledger.entries()[0].average == doctest::Approx(0.4));
  CHECK(ledger.entries()[1].average == doctest::Approx(0.3));
  CHECK_THROWS_AS(ledger.record(-1e-3), std::logic_error);

  RegretLedger zeros;
  for (int i = 0; i < 5; ++i) {
    const RegretEntry& e = zeros.record(0.0);
    CHECK(e.cumulative == 0.0);
    CHECK(e.average == 0.0);
  }

  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RegretLedger big;
  double sum = 0.0;
  for (int t = 1; t <= 1000; ++t) {
    const double r = u(rng);
    sum += r;
    const RegretEntry& e = big.record(r);
    CHECK(e.average == e.cumulative / t);
  }
  CHECK(std::abs(big.entries().back().cumulative - sum) <= 1e-12 * 1000);
}

TEST_CASE("usage sums") {
  const Eigen::VectorXd s = usage_sums({Eigen::Vector2d(0.1, 0.9), Eigen::Vector2d(0.2, 0.8)}, 2);
  CHECK(s(0) == doctest::Approx(0.3));
  CHECK(s(1) == doctest::Approx(1.7));
  CHECK(usage_sums({}, 3) == Eigen::VectorXd::Zero(3));
}

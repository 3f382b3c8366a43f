// Runs the acceptance criteria P1-P8 and prints one PASS/FAIL line each.
// Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "camobo/cost_model.hpp"
#include "camobo/driver.hpp"
#include "camobo/errors.hpp"
#include "camobo/external_objective.hpp"
#include "camobo/gp.hpp"
#include "camobo/metrics.hpp"
#include "camobo/scalarization.hpp"
#include "camobo/trace_io.hpp"
#include "dense_oracle.hpp"

using namespace camobo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::string csv_of(const RunTrace& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

std::string fmt_vec(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

int worker_count() { return static_cast<int>(std::max(1u, std::min(8u, std::thread::hardware_concurrency()))); }

Outcome p1_baseline_reduction() {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    RunConfig ca;
    ca.problem = "zdt3";
    ca.iterations = 30;
    ca.seed = seed;
    ca.cost_force_zero = true;
    RunConfig mo = ca;
    mo.cost_force_zero = false;
    mo.mode = Mode::MoUcb;
    if (csv_of(run(ca)) != csv_of(run(mo))) return {false, "traces differ for seed " + std::to_string(seed)};
  }
  return {true, "3 seeds, T=30, traces byte-identical"};
}

Outcome p2_cost_surface() {
  const CostModel model(CostConstraint::from_one_based({1, 2}, 2),
                        CostWeights(Eigen::Vector2d(0.7, 0.3), AssignmentPolicy::PaperLiteral));
  const double high = model(Eigen::Vector2d(0.9, 0.9), 1);
  const double low = model(Eigen::Vector2d(0.1, 0.2), 1);
  bool ok = high > low;
  double min_late = 1.0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const Eigen::Vector2d x(i / 20.0, j / 20.0);
      double prev = model(x, 1);
      for (int t = 2; t <= 1000; ++t) {
        const double c = model(x, t);
        ok = ok && c > prev;
        prev = c;
      }
      min_late = std::min(min_late, prev);
    }
  ok = ok && min_late > 0.95;
  return {ok, "C(0.9,0.9,1)=" + fmt(high, 5) + " C(0.1,0.2,1)=" + fmt(low, 5) + " min C(.,1000)=" + fmt(min_late, 5)};
}

struct SharedRuns {
  RepeatsResult ca;
  RepeatsResult mo;
};

SharedRuns zdt3_runs() {
  RunConfig c;
  c.problem = "zdt3";
  c.iterations = 100;
  c.seed = 0;
  c.repeats = 10;
  c.workers = worker_count();
  c.cost_constraint = {1, 2, 3, 4, 5};
  c.policy = AssignmentPolicy::BehaviorMatching;
  SharedRuns r;
  r.ca = run_repeats(c);
  c.mode = Mode::MoUcb;
  r.mo = run_repeats(c);
  return r;
}

std::vector<double> median_usage(const RepeatsResult& r) {
  std::vector<double> out;
  for (std::size_t i = 0; i < 5; ++i) {
    std::vector<double> v;
    for (const RunTrace& t : r.traces) v.push_back(t.usage_sums(static_cast<Eigen::Index>(i)));
    out.push_back(quantiles(v).median);
  }
  return out;
}

double median_final_hv(const RepeatsResult& r) {
  std::vector<double> v;
  for (const RunTrace& t : r.traces) v.push_back(t.final_hypervolume);
  return quantiles(v).median;
}

Outcome p3_usage_ordering(const SharedRuns& runs) {
  if (runs.ca.traces.size() != 10 || runs.mo.traces.size() != 10) return {false, "not all runs completed"};
  const std::vector<double> ca = median_usage(runs.ca);
  const std::vector<double> mo = median_usage(runs.mo);
  const bool a = ca[0] < 0.6 * mo[0];
  const bool b = ca[0] < ca[4];
  return {a && b, std::string("(a) ") + (a ? "ok" : "FAILED") + ": median sum x1 CA-MOBO " + fmt(ca[0]) +
                      " vs 0.6 x MO-UCB " + fmt(0.6 * mo[0]) + "; (b) " + (b ? "ok" : "FAILED") +
                      ": CA-MOBO medians " + fmt_vec(ca) + "; MO-UCB medians " + fmt_vec(mo)};
}

Outcome p4_hypervolume_parity(const SharedRuns& runs) {
  const double ca = median_final_hv(runs.ca);
  const double mo = median_final_hv(runs.mo);
  return {ca >= 0.85 * mo, "median final HV CA-MOBO " + fmt(ca) + " vs MO-UCB " + fmt(mo)};
}

Outcome p5_regret(const SharedRuns& runs) {
  int decreasing = 0;
  bool non_negative = true;
  for (const RunTrace& t : runs.ca.traces) {
    for (const IterationRecord& r : t.records) non_negative = non_negative && r.regret && *r.regret >= 0.0;
    if (t.records.size() == 100 && *t.records[99].average_regret < *t.records[9].average_regret) ++decreasing;
  }
  for (const RunTrace& t : runs.mo.traces)
    for (const IterationRecord& r : t.records) non_negative = non_negative && r.regret && *r.regret >= 0.0;
  return {decreasing >= 7 && non_negative, std::to_string(decreasing) + "/10 seeds with R'(100) < R'(10); " +
                                               (non_negative ? "all" : "NOT all") + " logged regrets non-negative"};
}

// --- P6 property suites -----------------------------------------------------

bool gp_vs_dense(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 10, d = 1 + trial % 4;
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) x(i, k) = u(rng);
      y(i) = g(rng);
    }
    const KernelHyper h{0.1 + u(rng), 0.2 + 2.0 * u(rng), 1e-4 + 0.1 * u(rng)};
    const GPModel model = GPModel::fit(x, y, h);
    auto kern = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
      return h.signal_variance * std::exp(-0.5 * (a - b).squaredNorm() / (h.lengthscale * h.lengthscale));
    };
    oracle::Matrix a(static_cast<std::size_t>(n), oracle::Vector(static_cast<std::size_t>(n)));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            kern(x.row(i).transpose(), x.row(j).transpose()) + (i == j ? model.diagonal_term() : 0.0);
    oracle::Vector yc;
    for (Eigen::Index i = 0; i < n; ++i) yc.push_back(y(i) - y.mean());
    const oracle::Vector alpha = oracle::solve(a, yc);
    for (int q = 0; q < 5; ++q) {
      Eigen::VectorXd xq(d);
      for (Eigen::Index k = 0; k < d; ++k) xq(k) = u(rng);
      oracle::Vector kv;
      for (Eigen::Index i = 0; i < n; ++i) kv.push_back(kern(xq, x.row(i).transpose()));
      const double mean = y.mean() + oracle::dot(kv, alpha);
      const double var = std::max(0.0, h.signal_variance - oracle::dot(kv, oracle::solve(a, kv)));
      const Prediction p = model.predict(xq);
      if (std::abs(p.mean - mean) > 1e-8 || std::abs(p.variance - var) > 1e-8) return false;
    }
  }
  return true;
}

bool hv_vs_monte_carlo(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 3 + trial; ++i) pts.push_back(Eigen::Vector2d(u(rng), u(rng)));
    const std::size_t samples = 200000;
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      const double a = u(rng), b = u(rng);
      hits += std::any_of(pts.begin(), pts.end(), [&](const Eigen::VectorXd& p) { return p(0) >= a && p(1) >= b; });
    }
    const double p = static_cast<double>(hits) / samples;
    const double se = std::sqrt(p * (1 - p) / samples);
    if (std::abs(hypervolume_2d(pts, Eigen::Vector2d::Zero()) - p) > 3.0 * se + 1e-12) return false;
  }
  return true;
}

bool pareto_vs_brute_force(Rng& rng) {
  std::uniform_int_distribution<int> k(0, 9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Eigen::VectorXd> ys;
    for (int i = 0; i < 50; ++i) ys.push_back(Eigen::Vector2d(k(rng) / 9.0, k(rng) / 9.0));
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < ys.size(); ++j)
        dominated = dominated || (j != i && (ys[j].array() >= ys[i].array()).all() && ys[j] != ys[i]);
      if (!dominated) expect.push_back(i);
    }
    if (pareto_filter(ys) != expect) return false;
  }
  return true;
}

bool front_recovery(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto grid = theta_grid_2d(0.01);
  const std::vector<Eigen::VectorXd> fixed{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(0.5, 0.5)};
  auto all = [](const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); };
  if (!all(verify_front_recovery(fixed, ReferencePoint{Eigen::Vector2d(-0.1, -0.1)}, grid))) return false;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a{u(rng), u(rng), u(rng)};
    std::sort(a.begin(), a.end());
    if (a[1] - a[0] < 0.05 || a[2] - a[1] < 0.05) continue;
    std::vector<Eigen::VectorXd> front;
    for (double v : a) front.push_back(Eigen::Vector2d(v, 1.0 - v));
    if (!all(verify_front_recovery(front, ReferencePoint::standard(2), grid))) return false;
  }
  return true;
}

bool chebyshev_properties(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index m = 2 + trial % 3;
    Eigen::VectorXd theta(m), y(m), bump(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      theta(i) = 0.01 + u(rng);
      y(i) = u(rng);
      bump(i) = 0.3 * u(rng);
    }
    theta /= theta.sum();
    const Eigen::VectorXd r = Eigen::VectorXd::Constant(m, -0.01);
    if (chebyshev(y + bump, theta, r) < chebyshev(y, theta, r)) return false;
    const double c = 0.1 + 5.0 * u(rng);
    std::vector<Eigen::VectorXd> cands;
    for (int k = 0; k < 8; ++k) cands.push_back(Eigen::VectorXd::NullaryExpr(m, [&] { return u(rng); }));
    auto argmax = [&](const Eigen::VectorXd& th) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < cands.size(); ++k)
        if (chebyshev(cands[k], th, r) > chebyshev(cands[best], th, r)) best = k;
      return best;
    };
    if (argmax(theta) != argmax(c * theta)) return false;
  }
  return true;
}

Outcome p6_properties() {
  Rng rng(20240601);
  const std::vector<std::pair<std::string, std::function<bool(Rng&)>>> suites{
      {"gp-dense", gp_vs_dense},         {"hv-mc", hv_vs_monte_carlo},     {"pareto-brute", pareto_vs_brute_force},
      {"front-recovery", front_recovery},           {"chebyshev", chebyshev_properties}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, fn] : suites) {
    const bool pass = fn(rng);
    ok = ok && pass;
    detail += name + (pass ? " ok " : " FAILED ");
  }
  return {ok, detail};
}

Outcome p7_determinism() {
  for (const char* problem : {"zdt3", "cross_holder", "matyas_booth"}) {
    RunConfig c;
    c.problem = problem;
    c.iterations = 15;
    c.seed = 11;
    if (csv_of(run(c)) != csv_of(run(c))) return {false, std::string("traces differ for ") + problem};
  }
  return {true, "zdt3, cross_holder, matyas_booth: byte-identical reruns"};
}

Outcome p8_protocol() {
  using S = ExternalProcess::Seconds;
  const std::string py = CAMOBO_PYTHON, stub = CAMOBO_STUB_PATH;
  ExternalProcess child({py, stub, "1"});
  if (child.handshake(3, S(10)) != 1) return {false, "handshake declared the wrong objective count"};
  for (int i = 0; i < 10; ++i) {
    const Eigen::Vector3d x(0.1 * i, -0.5, 2.0);
    if (child.evaluate(x, S(10))(0) != -x.sum()) return {false, "eval " + std::to_string(i) + " mismatched"};
  }
  if (child.shutdown() != 0) return {false, "child did not exit 0"};

  auto fails = [&](const std::string& mode, double timeout) {
    ExternalProcess p({py, stub, "1", mode});
    p.handshake(2, S(10));
    try {
      p.evaluate(Eigen::Vector2d(0, 0), S(timeout));
    } catch (const EvaluationFailure&) {
      return true;
    }
    return false;
  };
  const bool malformed = fails("malformed", 10);
  const bool timeout = fails("hang", 1);
  return {malformed && timeout, std::string("handshake + 10 evals + shutdown ok; malformed ") +
                                    (malformed ? "raised" : "NOT raised") + "; timeout " + (timeout ? "raised" : "NOT raised")};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const std::string& id, const std::function<Outcome()>& fn) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << " (" << fmt(secs, 3) << " s): " << o.detail << std::endl;
  };

  report("P1 baseline reduction", p1_baseline_reduction);
  report("P2 cost surface", p2_cost_surface);

  SharedRuns runs;
  const auto start = Clock::now();
  bool runs_ok = true;
  std::string runs_error;
  try {
    runs = zdt3_runs();
  } catch (const std::exception& e) {
    runs_ok = false;
    runs_error = e.what();
  }
  std::cout << "     ZDT3 shared runs (10 seeds x 2 modes, T=100): "
            << fmt(std::chrono::duration<double>(Clock::now() - start).count(), 3) << " s" << std::endl;
  auto shared = [&](Outcome (*fn)(const SharedRuns&)) {
    return [&, fn] { return runs_ok ? fn(runs) : Outcome{false, "runs failed: " + runs_error}; };
  };
  report("P3 usage ordering", shared(p3_usage_ordering));
  report("P4 hypervolume parity", shared(p4_hypervolume_parity));
  report("P5 regret ledger", shared(p5_regret));
  report("P6 property suites", p6_properties);
  report("P7 determinism", p7_determinism);
  report("P8 protocol conformance", p8_protocol);

  std::cout << (failures ? std::to_string(failures) + " criterion(s) failed" : "all criteria passed") << std::endl;
  return failures ? 1 : 0;
}

#include "camobo/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "camobo/acquisition.hpp"
#include "camobo/benchmarks.hpp"
#include "camobo/errors.hpp"
#include "camobo/metrics.hpp"
#include "camobo/scalarization.hpp"

namespace camobo {

std::string to_string(Mode mode) { return mode == Mode::CaMobo ? "ca-mobo" : "mo-ucb"; }

Mode parse_mode(const std::string& text) {
  if (text == "ca-mobo" || text == "ca_mobo") return Mode::CaMobo;
  if (text == "mo-ucb" || text == "mo_ucb") return Mode::MoUcb;
  throw std::invalid_argument("unknown mode '" + text + "' (expected ca-mobo or mo-ucb)");
}

void RunConfig::validate() const {
  if (problem.empty()) throw ConfigError("missing required key 'problem'");
  if (iterations < 1) throw ConfigError("'iterations' must be >= 1");
  if (n_init < 2) throw ConfigError("'n_init' must be >= 2");
  if (hyper_refit_period < 1) throw ConfigError("'hyper_refit_period' must be >= 1");
  if (candidate_count < 2) throw ConfigError("'candidate_count' must be >= 2");
  if (refine_steps < 0) throw ConfigError("'refine_steps' must be >= 0");
  if (repeats < 1) throw ConfigError("'repeats' must be >= 1");
  if (workers < 1) throw ConfigError("'workers' must be >= 1");
  if (oracle_grid_size < 1) throw ConfigError("'oracle_grid_size' must be >= 1");
  if (problem == "external") {
    if (!external) throw ConfigError("problem 'external' requires 'command' and 'search_lo'/'search_hi'");
    if (external->command.empty()) throw ConfigError("missing required key 'command'");
    if (external->raw_bounds.empty()) throw ConfigError("missing required keys 'search_lo'/'search_hi'");
    for (const Bounds& b : external->raw_bounds)
      if (!(b.hi > b.lo)) throw ConfigError("'search_hi' must exceed 'search_lo' in every dimension");
    if (!(external->timeout_seconds > 0.0)) throw ConfigError("'eval_timeout_s' must be positive");
  } else {
    const auto names = benchmark_names();
    if (std::find(names.begin(), names.end(), problem) == names.end())
      throw ConfigError("unknown problem '" + problem + "'");
  }
}

namespace {

std::shared_ptr<const BenchmarkProblem> cached_benchmark(const std::string& name, bool standard_forms) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, bool>, std::shared_ptr<const BenchmarkProblem>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{name, standard_forms}];
  if (!slot) slot = std::make_shared<const BenchmarkProblem>(make_benchmark(name, standard_forms));
  return slot;
}

Eigen::MatrixXd stack_rows(const std::vector<Eigen::VectorXd>& rows, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return m;
}

}  // namespace

std::unique_ptr<Objective> make_objective(const RunConfig& config) {
  if (config.problem == "external") {
    if (!config.external) throw ConfigError("external problem without external spec");
    return std::make_unique<ExternalObjective>(*config.external);
  }
  return std::make_unique<BenchmarkObjective>(cached_benchmark(config.problem, config.standard_forms));
}

Eigen::VectorXd evaluate_objective(Objective& objective, const Eigen::VectorXd& unit_x) {
  try {
    return objective.evaluate_raw(unit_x);
  } catch (const EvaluationFailure&) {
    objective.recover();
    return objective.evaluate_raw(unit_x);
  }
}

RunTrace run(const RunConfig& config, const ObjectiveFactory& factory) {
  config.validate();
  std::unique_ptr<Objective> objective = factory(config);
  return run(config, *objective);
}

RunTrace run(const RunConfig& config, Objective& objective) {
  config.validate();
  const std::size_t n = objective.n_dims();
  const std::size_t m = objective.n_objectives();
  const auto n_dims = static_cast<Eigen::Index>(n);
  const auto n_obj = static_cast<Eigen::Index>(m);

  RunTrace trace;
  trace.seed = config.seed;
  trace.n_dims = n;
  trace.n_objectives = m;

  Rng init_rng = make_rng(config.seed, Stream::kInitialDesign);
  Rng theta_rng = make_rng(config.seed, Stream::kTheta);
  Rng acq_rng = make_rng(config.seed, Stream::kAcquisition);
  Rng hyper_rng = make_rng(config.seed, Stream::kHyperparameters);

  std::optional<CostModel> cost_model;
  if (config.mode == Mode::CaMobo) {
    std::vector<std::size_t> order = config.cost_constraint;
    if (order.empty())
      for (std::size_t i = 1; i <= n; ++i) order.push_back(i);
    CostConstraint constraint = CostConstraint::from_one_based(order, n);
    Rng cost_rng = make_rng(config.seed, Stream::kCostWeights);
    CostWeights weights = sample_weights(cost_rng, constraint.size(), config.policy);
    trace.cost_weights = weights.values();
    cost_model.emplace(std::move(constraint), std::move(weights));
  }
  const CostModel* active_cost = (cost_model && !config.cost_force_zero) ? &*cost_model : nullptr;

  std::vector<Eigen::VectorXd> xs;
  std::vector<Eigen::VectorXd> raw_ys;

  auto finalize = [&](RunTrace& tr) {
    const Eigen::MatrixXd norm = raw_ys.empty() ? Eigen::MatrixXd() : objective.normalize_all(stack_rows(raw_ys, n_obj));
    tr.observations.clear();
    for (std::size_t i = 0; i < xs.size(); ++i)
      tr.observations.push_back({xs[i], raw_ys[i], norm.row(static_cast<Eigen::Index>(i)).transpose()});
    ParetoArchive archive;
    for (const Observation& o : tr.observations) archive.add(o.x, o.y_norm);
    tr.dominant = archive.dominant();
    tr.final_hypervolume = archive.size() ? archive.hypervolume(Eigen::VectorXd::Zero(n_obj)) : 0.0;
    std::vector<Eigen::VectorXd> selected;
    for (const IterationRecord& r : tr.records) selected.push_back(r.x);
    tr.usage_sums = usage_sums(selected, n_dims);
  };
  auto evaluate_or_abort = [&](const Eigen::VectorXd& x) {
    try {
      return evaluate_objective(objective, x);
    } catch (const EvaluationFailure& e) {
      trace.aborted = true;
      trace.abort_reason = e.what();
      finalize(trace);
      throw RunAborted(std::string("objective evaluation failed twice: ") + e.what(), trace);
    }
  };

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < config.n_init; ++i) {
    Eigen::VectorXd x(n_dims);
    for (Eigen::Index d = 0; d < n_dims; ++d) x(d) = unit(init_rng);
    Eigen::VectorXd y = evaluate_or_abort(x);
    xs.push_back(std::move(x));
    raw_ys.push_back(std::move(y));
  }

  const std::optional<RegretOracle> oracle = objective.regret_oracle(config.oracle_grid_size);
  const ReferencePoint reference = ReferencePoint::standard(n_obj);
  const Eigen::VectorXd hv_ref = Eigen::VectorXd::Zero(n_obj);
  const Eigen::VectorXd probe = Eigen::VectorXd::Constant(n_dims, 0.5);
  std::vector<std::optional<KernelHyper>> hypers(m);
  RegretLedger ledger;

  for (int t = 1; t <= config.iterations; ++t) {
    const Eigen::MatrixXd inputs = stack_rows(xs, n_dims);
    const Eigen::MatrixXd targets = objective.normalize_all(stack_rows(raw_ys, n_obj));

    std::vector<GPModel> models;
    models.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      const Eigen::VectorXd y = targets.col(static_cast<Eigen::Index>(k));
      if ((t - 1) % config.hyper_refit_period == 0 || !hypers[k])
        hypers[k] = optimize_hyperparameters(inputs, y, hyper_rng, hypers[k]);
      models.push_back(GPModel::fit(inputs, y, *hypers[k]));
    }

    AcquisitionContext ctx{{}, n, sample_theta(theta_rng, n_obj), reference, t, config.candidate_count,
                           config.refine_steps, active_cost ? std::optional<CostModel>(*active_cost) : std::nullopt};
    for (const GPModel& model : models) ctx.models.push_back(&model);
    const Selection sel = maximize_acquisition(ctx, acq_rng);

    Eigen::VectorXd y_raw = evaluate_or_abort(sel.x);
    xs.push_back(sel.x);
    raw_ys.push_back(y_raw);

    const Eigen::MatrixXd normalized = objective.normalize_all(stack_rows(raw_ys, n_obj));
    ParetoArchive archive;
    for (Eigen::Index i = 0; i < normalized.rows(); ++i)
      archive.add(xs[static_cast<std::size_t>(i)], normalized.row(i).transpose());

    IterationRecord rec;
    rec.t = t;
    rec.x = sel.x;
    rec.x_raw = objective.to_raw(sel.x);
    rec.y_raw = y_raw;
    rec.y_norm = normalized.row(normalized.rows() - 1).transpose();
    rec.theta = ctx.theta.values();
    rec.q = sel.value.q;
    rec.c = sel.value.c;
    rec.alpha = sel.value.alpha;
    rec.beta = ctx.beta_t();
    rec.cost_probe = active_cost ? (*active_cost)(probe, t) : 0.0;
    rec.hypervolume = archive.hypervolume(hv_ref);
    if (oracle) {
      const double r = instantaneous_regret(*oracle, ctx.theta, reference, t, rec.x, rec.y_norm, active_cost);
      const RegretEntry& e = ledger.record(r);
      rec.regret = e.instantaneous;
      rec.cumulative_regret = e.cumulative;
      rec.average_regret = e.average;
    }
    trace.records.push_back(std::move(rec));
  }

  for (const auto& h : hypers) trace.final_hypers.push_back(h.value_or(KernelHyper{}));
  finalize(trace);
  return trace;
}

Quantiles quantiles(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {at(0.5), at(0.25), at(0.75)};
}

std::vector<AggregateRow> aggregate_traces(const std::vector<RunTrace>& traces) {
  std::vector<AggregateRow> rows;
  if (traces.empty()) return rows;
  std::size_t steps = traces.front().records.size();
  for (const RunTrace& tr : traces) steps = std::min(steps, tr.records.size());
  const std::size_t n = traces.front().n_dims;

  std::vector<Eigen::VectorXd> running(traces.size(), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
  for (std::size_t s = 0; s < steps; ++s) {
    AggregateRow row;
    row.t = traces.front().records[s].t;
    std::vector<double> hv, reg;
    std::vector<std::vector<double>> usage(n);
    bool have_regret = true;
    for (std::size_t r = 0; r < traces.size(); ++r) {
      const IterationRecord& rec = traces[r].records[s];
      hv.push_back(rec.hypervolume);
      if (rec.average_regret)
        reg.push_back(*rec.average_regret);
      else
        have_regret = false;
      running[r] += rec.x;
      for (std::size_t d = 0; d < n; ++d) usage[d].push_back(running[r](static_cast<Eigen::Index>(d)));
    }
    row.hypervolume = quantiles(hv);
    if (have_regret) row.average_regret = quantiles(reg);
    for (auto& u : usage) row.usage_sums.push_back(quantiles(u));
    rows.push_back(std::move(row));
  }
  return rows;
}

RepeatsResult run_repeats(const RunConfig& config, const ObjectiveFactory& factory) {
  config.validate();
  const auto repeats = static_cast<std::size_t>(config.repeats);
  std::vector<std::optional<RunTrace>> results(repeats);
  std::vector<std::string> errors(repeats);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < repeats; i = next++) {
      RunConfig cfg = config;
      cfg.seed = config.seed + i;
      try {
        results[i] = run(cfg, factory);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(config.workers), repeats);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  RepeatsResult out;
  for (std::size_t i = 0; i < repeats; ++i) {
    if (results[i])
      out.traces.push_back(std::move(*results[i]));
    else
      out.failures.push_back({config.seed + i, errors[i]});
  }
  if (out.traces.size() * 2 < repeats)
    throw std::runtime_error("run_repeats: only " + std::to_string(out.traces.size()) + " of " +
                             std::to_string(repeats) + " runs succeeded; first error: " + out.failures.front().message);
  out.aggregate = aggregate_traces(out.traces);
  return out;
}

}  // namespace camobo

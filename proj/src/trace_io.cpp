#include "camobo/trace_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "camobo/metrics.hpp"

namespace camobo {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> trace_header(std::size_t n_dims, std::size_t n_objectives) {
  std::vector<std::string> h{"t"};
  for (std::size_t i = 1; i <= n_dims; ++i) h.push_back("x" + std::to_string(i));
  for (std::size_t i = 1; i <= n_dims; ++i) h.push_back("raw_x" + std::to_string(i));
  for (std::size_t i = 1; i <= n_objectives; ++i) h.push_back("raw_y" + std::to_string(i));
  for (std::size_t i = 1; i <= n_objectives; ++i) h.push_back("y" + std::to_string(i));
  for (std::size_t i = 1; i <= n_objectives; ++i) h.push_back("theta" + std::to_string(i));
  for (const char* c : {"Q", "C", "alpha", "beta", "cost_probe", "regret", "cum_regret", "avg_regret", "hypervolume"})
    h.emplace_back(c);
  return h;
}

namespace {

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void append(std::vector<std::string>& f, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) f.push_back(format_double(v(i)));
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << join(trace_header(trace.n_dims, trace.n_objectives)) << '\n';
  for (const IterationRecord& r : trace.records) {
    std::vector<std::string> f{std::to_string(r.t)};
    append(f, r.x);
    append(f, r.x_raw);
    append(f, r.y_raw);
    append(f, r.y_norm);
    append(f, r.theta);
    for (double v : {r.q, r.c, r.alpha, r.beta, r.cost_probe}) f.push_back(format_double(v));
    f.push_back(optional_field(r.regret));
    f.push_back(optional_field(r.cumulative_regret));
    f.push_back(optional_field(r.average_regret));
    f.push_back(format_double(r.hypervolume));
    out << join(f) << '\n';
  }
}

TraceTable read_trace_csv(std::istream& in, const std::string& source) {
  auto fail = [&](const std::string& msg) -> void { throw std::runtime_error(source + ": " + msg); };
  std::string line;
  if (!std::getline(in, line)) fail("empty file");
  const std::vector<std::string> header = split(line);
  TraceTable table;
  for (const std::string& h : header) {
    if (std::regex_match(h, std::regex("x[0-9]+"))) ++table.n_dims;
    if (std::regex_match(h, std::regex("y[0-9]+"))) ++table.n_objectives;
  }
  if (header != trace_header(table.n_dims, table.n_objectives)) fail("unexpected header");

  const auto n = static_cast<Eigen::Index>(table.n_dims);
  const auto m = static_cast<Eigen::Index>(table.n_objectives);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != header.size()) fail("line " + std::to_string(line_no) + " has " + std::to_string(f.size()) + " fields");
    std::size_t pos = 0;
    auto number = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size()) fail("line " + std::to_string(line_no) + ": bad number '" + s + "'");
      return v;
    };
    auto vec = [&](Eigen::Index k) {
      Eigen::VectorXd v(k);
      for (Eigen::Index i = 0; i < k; ++i) v(i) = number(f[pos++]);
      return v;
    };
    auto opt = [&]() -> std::optional<double> {
      const std::string& s = f[pos++];
      if (s.empty()) return std::nullopt;
      return number(s);
    };
    IterationRecord r;
    r.t = static_cast<int>(number(f[pos++]));
    r.x = vec(n);
    r.x_raw = vec(n);
    r.y_raw = vec(m);
    r.y_norm = vec(m);
    r.theta = vec(m);
    r.q = number(f[pos++]);
    r.c = number(f[pos++]);
    r.alpha = number(f[pos++]);
    r.beta = number(f[pos++]);
    r.cost_probe = number(f[pos++]);
    r.regret = opt();
    r.cumulative_regret = opt();
    r.average_regret = opt();
    r.hypervolume = number(f[pos++]);
    table.records.push_back(std::move(r));
  }
  return table;
}

TraceTable read_trace_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  return read_trace_csv(in, path.string());
}

void write_summary_json(std::ostream& out, const RunTrace& trace, const RunConfig& config) {
  json j;
  j["seed"] = trace.seed;
  j["problem"] = config.problem;
  j["mode"] = to_string(config.mode);
  j["iterations"] = config.iterations;
  j["n_init"] = config.n_init;
  j["n_dims"] = trace.n_dims;
  j["n_objectives"] = trace.n_objectives;
  j["candidate_count"] = config.candidate_count;
  j["hyper_refit_period"] = config.hyper_refit_period;
  if (config.mode == Mode::CaMobo) {
    j["policy"] = to_string(config.policy);
    j["cost_constraint"] = config.cost_constraint;
    j["cost_force_zero"] = config.cost_force_zero;
  }
  if (trace.cost_weights) j["cost_weights"] = to_std(*trace.cost_weights);
  json obs = json::array();
  for (const Observation& o : trace.observations)
    obs.push_back({{"x", to_std(o.x)}, {"y_raw", to_std(o.y_raw)}, {"y", to_std(o.y_norm)}});
  j["observations"] = obs;
  j["dominant"] = trace.dominant;
  j["usage_sums"] = to_std(trace.usage_sums);
  j["final_hypervolume"] = trace.final_hypervolume;
  json hypers = json::array();
  for (const KernelHyper& h : trace.final_hypers)
    hypers.push_back({{"lengthscale", h.lengthscale}, {"signal_variance", h.signal_variance},
                      {"noise_variance", h.noise_variance}});
  j["final_hyperparameters"] = hypers;
  j["aborted"] = trace.aborted;
  if (trace.aborted) j["abort_reason"] = trace.abort_reason;
  out << j.dump(2) << '\n';
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  std::vector<std::string> h{"t", "hv_median", "hv_q25", "hv_q75", "avg_regret_median", "avg_regret_q25",
                             "avg_regret_q75"};
  const std::size_t n = rows.empty() ? 0 : rows.front().usage_sums.size();
  for (std::size_t i = 1; i <= n; ++i)
    for (const char* s : {"_median", "_q25", "_q75"}) h.push_back("usage" + std::to_string(i) + s);
  out << join(h) << '\n';
  for (const AggregateRow& r : rows) {
    std::vector<std::string> f{std::to_string(r.t), format_double(r.hypervolume.median),
                               format_double(r.hypervolume.q25), format_double(r.hypervolume.q75)};
    if (r.average_regret) {
      for (double v : {r.average_regret->median, r.average_regret->q25, r.average_regret->q75})
        f.push_back(format_double(v));
    } else {
      f.insert(f.end(), 3, std::string());
    }
    for (const Quantiles& q : r.usage_sums)
      for (double v : {q.median, q.q25, q.q75}) f.push_back(format_double(v));
    out << join(f) << '\n';
  }
}

void write_run_artifacts(const fs::path& dir, const RunTrace& trace, const RunConfig& config) {
  fs::create_directories(dir);
  const std::string seed = std::to_string(trace.seed);
  {
    std::ofstream out(dir / ("trace_" + seed + ".csv"));
    write_trace_csv(out, trace);
    if (!out) throw std::runtime_error("cannot write trace into " + dir.string());
  }
  std::ofstream out(dir / ("summary_" + seed + ".json"));
  write_summary_json(out, trace, config);
  if (!out) throw std::runtime_error("cannot write summary into " + dir.string());
}

std::size_t write_plotdata(const fs::path& trace_dir, const fs::path& out_dir) {
  if (!fs::is_directory(trace_dir)) throw std::runtime_error(trace_dir.string() + ": not a directory");
  std::map<std::uint64_t, fs::path> traces;
  const std::regex name("trace_([0-9]+)\\.csv");
  for (const auto& entry : fs::directory_iterator(trace_dir)) {
    std::smatch m;
    const std::string fname = entry.path().filename().string();
    if (std::regex_match(fname, m, name)) traces[std::stoull(m[1])] = entry.path();
  }
  if (traces.empty()) throw std::runtime_error(trace_dir.string() + ": no trace_<seed>.csv files");

  fs::create_directories(out_dir);
  std::ofstream hv(out_dir / "hypervolume_vs_t.csv"), avg(out_dir / "avg_regret_vs_t.csv"),
      cum(out_dir / "cum_regret_vs_t.csv"), usage(out_dir / "usage_sums_vs_t.csv"),
      pareto(out_dir / "pareto_points.csv");
  hv << "seed,t,hypervolume\n";
  avg << "seed,t,avg_regret\n";
  cum << "seed,t,cum_regret\n";
  bool headers_done = false;

  for (const auto& [seed, path] : traces) {
    const TraceTable table = read_trace_csv(path);
    if (!headers_done) {
      usage << "seed,t";
      for (std::size_t i = 1; i <= table.n_dims; ++i) usage << ",usage" << i;
      usage << '\n';
      pareto << "seed,index";
      for (std::size_t i = 1; i <= table.n_dims; ++i) pareto << ",x" << i;
      for (std::size_t i = 1; i <= table.n_objectives; ++i) pareto << ",y" << i;
      for (std::size_t i = 1; i <= table.n_objectives; ++i) pareto << ",raw_y" << i;
      pareto << '\n';
      headers_done = true;
    }
    Eigen::VectorXd running = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table.n_dims));
    for (const IterationRecord& r : table.records) {
      hv << seed << ',' << r.t << ',' << format_double(r.hypervolume) << '\n';
      avg << seed << ',' << r.t << ',' << optional_field(r.average_regret) << '\n';
      cum << seed << ',' << r.t << ',' << optional_field(r.cumulative_regret) << '\n';
      running += r.x;
      usage << seed << ',' << r.t;
      for (Eigen::Index i = 0; i < running.size(); ++i) usage << ',' << format_double(running(i));
      usage << '\n';
    }

    // Pareto points come from the summary when present (it includes the
    // initial design), else from the trace rows alone.
    std::vector<Eigen::VectorXd> xs, ys, raws;
    const fs::path summary = trace_dir / ("summary_" + std::to_string(seed) + ".json");
    if (fs::exists(summary)) {
      std::ifstream in(summary);
      const json j = json::parse(in, nullptr, false);
      if (j.is_discarded() || !j.contains("observations") || !j["observations"].is_array())
        throw std::runtime_error(summary.string() + ": malformed summary");
      try {
        for (const json& o : j["observations"]) {
          const auto x = o.at("x").get<std::vector<double>>();
          const auto y = o.at("y").get<std::vector<double>>();
          const auto yr = o.at("y_raw").get<std::vector<double>>();
          xs.push_back(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
          ys.push_back(Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())));
          raws.push_back(Eigen::Map<const Eigen::VectorXd>(yr.data(), static_cast<Eigen::Index>(yr.size())));
        }
      } catch (const json::exception& e) {
        throw std::runtime_error(summary.string() + ": malformed summary (" + e.what() + ")");
      }
    } else {
      for (const IterationRecord& r : table.records) {
        xs.push_back(r.x);
        ys.push_back(r.y_norm);
        raws.push_back(r.y_raw);
      }
    }
    for (std::size_t idx : pareto_filter(ys)) {
      pareto << seed << ',' << idx;
      for (Eigen::Index i = 0; i < xs[idx].size(); ++i) pareto << ',' << format_double(xs[idx](i));
      for (Eigen::Index i = 0; i < ys[idx].size(); ++i) pareto << ',' << format_double(ys[idx](i));
      for (Eigen::Index i = 0; i < raws[idx].size(); ++i) pareto << ',' << format_double(raws[idx](i));
      pareto << '\n';
    }
  }
  return traces.size();
}

}  // namespace camobo

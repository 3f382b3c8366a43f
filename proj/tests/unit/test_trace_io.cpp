#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "camobo/metrics.hpp"
#include "camobo/trace_io.hpp"

using namespace camobo;
namespace fs = std::filesystem;

namespace {

RunConfig tiny(std::uint64_t seed) {
  RunConfig c;
  c.problem = "zdt3";
  c.iterations = 6;
  c.seed = seed;
  c.candidate_count = 128;
  c.oracle_grid_size = 256;
  return c;
}

std::vector<std::vector<std::string>> read_rows(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("camobo_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("doubles survive a text round trip") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("header layout") {
  const std::vector<std::string> h = trace_header(2, 2);
  const std::vector<std::string> expected{"t",     "x1",  "x2", "raw_x1", "raw_x2", "raw_y1", "raw_y2",
                                          "y1",    "y2",  "theta1", "theta2", "Q", "C", "alpha", "beta",
                                          "cost_probe", "regret", "cum_regret", "avg_regret", "hypervolume"};
  CHECK(h == expected);
}

TEST_CASE("trace csv round trip is exact") {
  const RunTrace trace = run(tiny(4));
  std::stringstream buf;
  write_trace_csv(buf, trace);
  const TraceTable table = read_trace_csv(buf, "memory");
  CHECK(table.n_dims == 5);
  CHECK(table.n_objectives == 2);
  REQUIRE(table.records.size() == trace.records.size());
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const IterationRecord& a = trace.records[i];
    const IterationRecord& b = table.records[i];
    CHECK(a.t == b.t);
    CHECK(a.x == b.x);
    CHECK(a.x_raw == b.x_raw);
    CHECK(a.y_raw == b.y_raw);
    CHECK(a.y_norm == b.y_norm);
    CHECK(a.theta == b.theta);
    CHECK(a.q == b.q);
    CHECK(a.c == b.c);
    CHECK(a.alpha == b.alpha);
    CHECK(a.beta == b.beta);
    CHECK(a.cost_probe == b.cost_probe);
    CHECK(a.regret == b.regret);
    CHECK(a.cumulative_regret == b.cumulative_regret);
    CHECK(a.average_regret == b.average_regret);
    CHECK(a.hypervolume == b.hypervolume);
  }
  std::stringstream again;
  TraceTable copy = table;
  RunTrace rebuilt = trace;
  rebuilt.records = copy.records;
  write_trace_csv(again, rebuilt);
  std::stringstream first;
  write_trace_csv(first, trace);
  CHECK(again.str() == first.str());
}

TEST_CASE("malformed traces name their source") {
  std::stringstream bad("t,x1\n1,abc\n");
  try {
    read_trace_csv(bad, "broken.csv");
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("broken.csv") != std::string::npos);
  }
}

TEST_CASE("summary json") {
  const RunConfig c = tiny(2);
  const RunTrace ca = run(c);
  std::stringstream out;
  write_summary_json(out, ca, c);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j.contains("cost_weights"));
  CHECK(j["observations"].size() == ca.observations.size());
  CHECK(j["usage_sums"].size() == 5);

  RunConfig mo = c;
  mo.mode = Mode::MoUcb;
  std::stringstream out2;
  write_summary_json(out2, run(mo), mo);
  CHECK_FALSE(nlohmann::json::parse(out2.str()).contains("cost_weights"));
}

TEST_CASE("plot data from a trace directory") {
  const fs::path dir = scratch("plotdata");
  const RunConfig c = tiny(7);
  const RunTrace trace = run(c);
  write_run_artifacts(dir, trace, c);
  CHECK(fs::exists(dir / "trace_7.csv"));
  CHECK(fs::exists(dir / "summary_7.json"));

  CHECK(write_plotdata(dir, dir / "plotdata") == 1);
  for (const char* f : {"hypervolume_vs_t.csv", "avg_regret_vs_t.csv", "cum_regret_vs_t.csv", "usage_sums_vs_t.csv"})
    CHECK(read_rows(dir / "plotdata" / f).size() == static_cast<std::size_t>(c.iterations));

  // Last usage row against a recomputation from the trace file.
  const TraceTable table = read_trace_csv(dir / "trace_7.csv");
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(5);
  for (const IterationRecord& r : table.records) sums += r.x;
  const auto usage = read_rows(dir / "plotdata" / "usage_sums_vs_t.csv");
  for (Eigen::Index i = 0; i < 5; ++i) {
    CHECK(std::stod(usage.back()[static_cast<std::size_t>(2 + i)]) == doctest::Approx(sums(i)).epsilon(1e-12));
    CHECK(sums(i) == doctest::Approx(trace.usage_sums(i)).epsilon(1e-12));
  }

  std::vector<Eigen::VectorXd> ys;
  for (const auto& row : read_rows(dir / "plotdata" / "pareto_points.csv"))
    ys.push_back(Eigen::Vector2d(std::stod(row[7]), std::stod(row[8])));
  REQUIRE_FALSE(ys.empty());
  for (std::size_t i = 0; i < ys.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) CHECK_FALSE(dominates(ys[i], ys[j]));

  fs::remove_all(dir);
}

TEST_CASE("plot data rejects malformed traces") {
  const fs::path dir = scratch("badplot");
  std::ofstream(dir / "trace_1.csv") << "t,x1\nnot,a,trace\n";
  try {
    write_plotdata(dir, dir / "plotdata");
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("trace_1.csv") != std::string::npos);
  }
  fs::remove_all(dir);
}

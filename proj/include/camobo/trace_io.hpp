#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "camobo/driver.hpp"

namespace camobo {

/// Doubles are written with 17 significant digits so reading a file back
/// reproduces every value bit for bit.
std::string format_double(double v);

/// Column order: t, x*, raw_x*, raw_y*, y*, theta*, Q, C, alpha, beta,
/// cost_probe, regret, cum_regret, avg_regret, hypervolume. Regret
/// columns are empty when no oracle is available.
std::vector<std::string> trace_header(std::size_t n_dims, std::size_t n_objectives);
void write_trace_csv(std::ostream& out, const RunTrace& trace);

struct TraceTable {
  std::size_t n_dims = 0;
  std::size_t n_objectives = 0;
  std::vector<IterationRecord> records;
};

/// Throws std::runtime_error naming the source on any malformed line.
TraceTable read_trace_csv(std::istream& in, const std::string& source);
TraceTable read_trace_csv(const std::filesystem::path& path);

/// Summary: config echo, initial design and all observations, dominant
/// set, usage sums, final hypervolume and (ca-mobo only) cost weights.
void write_summary_json(std::ostream& out, const RunTrace& trace, const RunConfig& config);

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// Writes trace_<seed>.csv and summary_<seed>.json into `dir`.
void write_run_artifacts(const std::filesystem::path& dir, const RunTrace& trace, const RunConfig& config);

/// Reads every trace_<seed>.csv (and matching summary) in `trace_dir`
/// and emits long-format CSVs into `out_dir`: hypervolume_vs_t,
/// avg_regret_vs_t, cum_regret_vs_t, usage_sums_vs_t, pareto_points.
/// Returns the number of traces processed.
std::size_t write_plotdata(const std::filesystem::path& trace_dir, const std::filesystem::path& out_dir);

}  // namespace camobo

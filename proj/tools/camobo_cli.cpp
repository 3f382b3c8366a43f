// Command-line harness: run experiments from a TOML config and turn
// trace directories into plot-ready CSVs.
//
//   camobo run --config zdt3.toml [--seed 7] [--mode mo-ucb] [--repeats 10] ...
//   camobo plotdata out/zdt3 [--out out/zdt3/plotdata]

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "camobo/config.hpp"
#include "camobo/driver.hpp"
#include "camobo/errors.hpp"
#include "camobo/trace_io.hpp"

namespace fs = std::filesystem;
using namespace camobo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct RunFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> policy;
  std::optional<int> repeats;
  std::optional<std::string> out;
  std::optional<int> workers;
  bool standard_forms = false;
};

int cmd_run(const RunFlags& flags) {
  ConfigFile cfg;
  try {
    cfg = load_config(flags.config_path);
    RunConfig& r = cfg.run;
    if (flags.seed) r.seed = *flags.seed;
    if (flags.mode) r.mode = parse_mode(*flags.mode);
    if (flags.policy) r.policy = parse_policy(*flags.policy);
    if (flags.repeats) r.repeats = *flags.repeats;
    if (flags.workers) r.workers = *flags.workers;
    if (flags.standard_forms) r.standard_forms = true;
    if (flags.out) cfg.output_dir = *flags.out;
    r.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const fs::path out_dir = cfg.output_dir;
  try {
    if (cfg.run.repeats == 1) {
      RunTrace trace;
      try {
        trace = run(cfg.run);
      } catch (const RunAborted& e) {
        write_run_artifacts(out_dir, e.partial(), cfg.run);
        std::cerr << "run aborted: " << e.what() << " (partial trace written to " << out_dir.string() << ")\n";
        return kExitRuntime;
      }
      write_run_artifacts(out_dir, trace, cfg.run);
      std::ofstream agg(out_dir / "aggregate.csv");
      write_aggregate_csv(agg, aggregate_traces({trace}));
      std::cout << "seed " << trace.seed << ": final hypervolume " << format_double(trace.final_hypervolume)
                << ", " << trace.records.size() << " iterations -> " << out_dir.string() << '\n';
      return kExitOk;
    }

    const RepeatsResult result = run_repeats(cfg.run);
    for (const RunTrace& trace : result.traces) write_run_artifacts(out_dir, trace, cfg.run);
    std::ofstream agg(out_dir / "aggregate.csv");
    write_aggregate_csv(agg, result.aggregate);
    for (const RepeatFailure& f : result.failures) std::cerr << "seed " << f.seed << " failed: " << f.message << '\n';
    std::cout << result.traces.size() << "/" << cfg.run.repeats << " runs succeeded -> " << out_dir.string() << '\n';
    if (!result.aggregate.empty())
      std::cout << "median final hypervolume " << format_double(result.aggregate.back().hypervolume.median) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_plotdata(const std::string& trace_dir, const std::optional<std::string>& out) {
  try {
    const fs::path dest = out ? fs::path(*out) : fs::path(trace_dir) / "plotdata";
    const std::size_t n = write_plotdata(trace_dir, dest);
    std::cout << "wrote plot data for " << n << " trace(s) to " << dest.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-aware multi-objective Bayesian optimisation harness"};
  app.require_subcommand(1);

  RunFlags flags;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment described by a config file");
  run_cmd->add_option("--config", flags.config_path, "TOML config file")->required();
  run_cmd->add_option("--seed", flags.seed, "Base seed (overrides config)");
  run_cmd->add_option("--mode", flags.mode, "ca-mobo or mo-ucb")->check(CLI::IsMember({"ca-mobo", "mo-ucb"}));
  run_cmd->add_option("--policy", flags.policy, "Cost weight assignment")
      ->check(CLI::IsMember({"paper-literal", "behavior-matching"}));
  run_cmd->add_option("--repeats", flags.repeats, "Number of seeds");
  run_cmd->add_option("--out", flags.out, "Output directory");
  run_cmd->add_option("--workers", flags.workers, "Parallel runs");
  run_cmd->add_flag("--standard-forms", flags.standard_forms, "Use the canonical (sum of squares) Booth function");

  std::string trace_dir;
  std::optional<std::string> plot_out;
  CLI::App* plot_cmd = app.add_subcommand("plotdata", "Emit long-format CSVs from a directory of traces");
  plot_cmd->add_option("trace_dir", trace_dir, "Directory with trace_<seed>.csv files")->required();
  plot_cmd->add_option("--out", plot_out, "Destination (default <trace_dir>/plotdata)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run_cmd) return cmd_run(flags);
  return cmd_plotdata(trace_dir, plot_out);
}

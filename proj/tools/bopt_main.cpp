// Experiment runner for the discrete Bayesian-optimization toolkit.
//
//   bopt run    — execute a configured experiment, writing trace files
//   bopt rank   — print the method ranking for a directory of traces
//   bopt report — write plot-ready report files for a directory of traces

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bopt/experiment.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (!field.empty()) out.push_back(field);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Bayesian optimization with per-iteration kernel/acquisition selection"};
  app.require_subcommand(1);

  // --- run ---
  auto* run = app.add_subcommand("run", "Run an experiment");
  std::string config_path, methods_csv, out_dir, partition_s, tie_break_s, target_mode;
  std::vector<std::string> task_names, table_paths;
  int trials = -1, iters = -1, n_init = -1, workers = -1, t_max = -1, ratio_divisor = -1;
  double percentile = -1.0;
  long long subsample_cap = -1;
  run->add_option("--config", config_path, "JSON experiment configuration");
  run->add_option("--task", task_names, "Synthetic task name (repeatable)");
  run->add_option("--table", table_paths, "Tabular task file (repeatable)");
  run->add_option("--methods", methods_csv,
                  "Comma-separated method list; 'boost', '<kernel>_<acq>', 'pairs', 'all'");
  run->add_option("--trials", trials, "Number of trials (seeds 0..trials-1)");
  run->add_option("--iters", iters, "Optimization iterations per trial");
  run->add_option("--init", n_init, "Initial design size");
  run->add_option("--workers", workers, "Worker pool size (0 = hardware)");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--t-max", t_max, "Internal run iteration budget");
  run->add_option("--partition", partition_s, "Partition strategy: kmeans | random");
  run->add_option("--ratio-divisor", ratio_divisor, "Reference size divisor");
  run->add_option("--percentile", percentile, "Internal target percentile");
  run->add_option("--tie-break", tie_break_s, "Tie break: priority | random");
  run->add_option("--target-mode", target_mode, "Internal target: percentile | optimum");
  run->add_option("--subsample-cap", subsample_cap,
                  "Seeded cap on scanned candidates per iteration (0 = off)");

  // --- rank ---
  auto* rank = app.add_subcommand("rank", "Rank methods from trace files");
  std::string rank_traces;
  long long rank_at = -1;
  rank->add_option("--traces", rank_traces, "Directory of .trace files")->required();
  rank->add_option("--at", rank_at, "Evaluation index (default: last)");

  // --- report ---
  auto* report = app.add_subcommand("report", "Write report files from traces");
  std::string report_traces, report_out;
  long long report_at = -1;
  report->add_option("--traces", report_traces, "Directory of .trace files")->required();
  report->add_option("--out", report_out, "Report output directory")->required();
  report->add_option("--at", report_at, "Evaluation index (default: last)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      bopt::ExperimentConfig cfg;
      if (!config_path.empty()) cfg = bopt::load_config_file(config_path);
      if (!task_names.empty()) cfg.tasks = task_names;
      if (!table_paths.empty()) cfg.tables = table_paths;
      if (!methods_csv.empty()) cfg.methods = split_csv(methods_csv);
      if (trials >= 0) cfg.trials = trials;
      if (iters >= 0) cfg.iterations = iters;
      if (n_init >= 0) cfg.n_init = n_init;
      if (workers >= 0) cfg.workers = workers;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      if (t_max >= 0) cfg.t_max = t_max;
      if (ratio_divisor >= 0) cfg.ratio_divisor = ratio_divisor;
      if (percentile >= 0.0) cfg.percentile = percentile;
      if (!partition_s.empty()) {
        if (partition_s == "kmeans") cfg.strategy = bopt::PartitionStrategy::KMeans;
        else if (partition_s == "random") cfg.strategy = bopt::PartitionStrategy::Random;
        else throw std::invalid_argument("unknown partition strategy: " + partition_s);
      }
      if (!tie_break_s.empty()) {
        if (tie_break_s == "priority") cfg.tie_break = bopt::TieBreak::Priority;
        else if (tie_break_s == "random") cfg.tie_break = bopt::TieBreak::Random;
        else throw std::invalid_argument("unknown tie break: " + tie_break_s);
      }
      if (!target_mode.empty()) cfg.target_mode = target_mode;
      if (subsample_cap >= 0) cfg.subsample_cap = std::size_t(subsample_cap);

      const auto result = bopt::run_experiment(cfg);
      std::cout << "wrote " << result.traces.size() << " traces to "
                << (std::filesystem::path(cfg.out_dir) / "traces").string() << "\n";
      return 0;
    }

    if (rank->parsed()) {
      const auto traces = bopt::read_trace_dir(rank_traces);
      const std::size_t at = rank_at >= 0 ? std::size_t(rank_at)
                                          : traces.front().best_so_far.size() - 1;
      std::cout << bopt::format_rank_table(bopt::rank_methods(traces, at));
      return 0;
    }

    if (report->parsed()) {
      const auto traces = bopt::read_trace_dir(report_traces);
      const std::size_t at = report_at >= 0 ? std::size_t(report_at)
                                            : traces.front().best_so_far.size() - 1;
      const auto table = bopt::rank_methods(traces, at);
      const auto runtimes = bopt::read_runtimes_csv(
          (std::filesystem::path(report_traces) / "runtimes.csv").string());
      bopt::emit_report(table, traces, report_out, runtimes);
      std::cout << "report written to " << report_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

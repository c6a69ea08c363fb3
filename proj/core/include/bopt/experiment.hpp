#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bopt/trace.hpp"

namespace bopt {

// One entry of the method list: the adaptive selector or a fixed pair.
struct MethodSpec {
  std::string label;
  bool adaptive = false;
  PairConfig pair;  // meaningful when !adaptive
};

MethodSpec parse_method(const std::string& name);
// Expands the shorthands "all" (boost + the 16 pairs) and "pairs" (16 pairs).
std::vector<MethodSpec> parse_methods(const std::vector<std::string>& names);

struct ExperimentConfig {
  std::vector<std::string> tasks;   // synthetic task names
  std::vector<std::string> tables;  // tabular file paths
  std::vector<std::string> methods = {"all"};
  int n_init = 10;
  int iterations = 90;
  int trials = 10;
  int workers = 0;  // 0 = hardware concurrency
  std::string out_dir = "out";
  // selector knobs
  int t_max = 20;
  double percentile = 5.0;
  int ratio_divisor = 3;
  PartitionStrategy strategy = PartitionStrategy::KMeans;
  TieBreak tie_break = TieBreak::Priority;
  std::string target_mode = "percentile";  // "percentile" | "optimum"
  std::size_t subsample_cap = 0;
};

// JSON file mirroring the ExperimentConfig fields; missing keys keep defaults.
ExperimentConfig load_config_file(const std::string& path);

struct RuntimeRecord {
  std::string task;
  std::string method;
  std::uint64_t trial_seed = 0;
  double total_seconds = 0.0;
  int iterations = 0;
};

struct ExperimentResult {
  std::vector<RegretTrace> traces;
  std::vector<RuntimeRecord> runtimes;
};

// Runs every (task, method, trial) job on a bounded worker pool; trial t uses
// seed t-1. Writes one trace file per run under <out_dir>/traces plus a
// wall-clock runtimes.csv (the only non-deterministic output).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct RankTable {
  std::vector<std::string> tasks;
  std::vector<std::string> methods;
  std::vector<std::vector<double>> mean_regret;  // [task][method] at the index
  std::vector<std::vector<int>> ranks;           // [task][method]
  std::vector<double> average_rank;              // [method]
  std::size_t evaluation_index = 0;
};

// Ranks methods per task by mean regret at evaluation_index; ties recurse to
// earlier indices, and full-prefix ties share the minimum rank.
RankTable rank_methods(const std::vector<RegretTrace>& traces,
                       std::size_t evaluation_index);

// Writes rank_table.csv, per-(task, method) regret curves, the selected-pair
// log for adaptive runs, and a runtime summary when records are available.
void emit_report(const RankTable& table, const std::vector<RegretTrace>& traces,
                 const std::string& out_dir,
                 const std::vector<RuntimeRecord>& runtimes = {});

std::vector<RegretTrace> read_trace_dir(const std::string& dir);
void write_runtimes_csv(const std::string& path, std::vector<RuntimeRecord> records);
// Empty result when the file does not exist.
std::vector<RuntimeRecord> read_runtimes_csv(const std::string& path);

std::string format_rank_table(const RankTable& table);

}  // namespace bopt

#pragma once

#include "bopt/selector.hpp"
#include "bopt/tasks.hpp"

namespace bopt {

struct RunOptions {
  int workers = 1;                      // internal pair evals + candidate scan
  std::size_t candidate_block = 8192;   // posterior evaluation block size
  std::size_t subsample_cap = 0;        // 0 = scan every unobserved candidate
};

struct RegretTrace {
  std::string task;
  std::string method;
  bool adaptive = false;
  std::uint64_t trial_seed = 0;
  int n_init = 0;
  int iterations = 0;  // requested; the trace is padded if candidates run out
  int dimension = 0;
  double optimum = 0.0;
  std::size_t subsample_cap = 0;
  std::vector<double> best_so_far;         // one entry per evaluation, padded
  std::vector<PairConfig> selected_pairs;  // one entry per executed iteration
  std::vector<double> wall_times;          // seconds per iteration; not persisted
};

// Fixed-pair BO: evaluate the initial design, then repeatedly fit on all
// observations and evaluate the acquisition maximizer over the unobserved
// candidates. Init points are task-native coordinates.
RegretTrace run_fixed(const DiscreteTask& task, const PairConfig& pair,
                      const std::vector<Eigen::VectorXd>& init, int iters,
                      std::uint64_t seed, const RunOptions& opts = RunOptions{});

// Adaptive BO: each iteration re-selects the kernel-acquisition pair from the
// data-in-hand before taking one fixed-pair step. Internal selection consumes
// no objective evaluations.
RegretTrace run_boost(const DiscreteTask& task, const SelectorConfig& cfg,
                      const std::vector<Eigen::VectorXd>& init, int iters,
                      std::uint64_t seed, const RunOptions& opts = RunOptions{});

std::vector<double> simple_regret(const RegretTrace& trace, double optimum);

}  // namespace bopt

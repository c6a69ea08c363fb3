#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bopt/acquisition.hpp"
#include "bopt/partition.hpp"

namespace bopt {

// One kernel-acquisition combination, with the fixed tie-breaking priorities
// (lower wins): acquisitions EI < PI < LCB < PM, kernels Matern 3/2 <
// Matern 5/2 < RBF < RQ.
struct PairConfig {
  KernelSpec kernel;
  AcquisitionSpec acquisition;
  int acq_priority = 0;
  int kernel_priority = 0;

  std::string name() const;  // e.g. "matern32_ei"
};

PairConfig make_pair(KernelFamily kernel, AcquisitionFamily acquisition);
PairConfig pair_from_name(const std::string& name);
// All 16 combinations, acquisition-major.
std::vector<PairConfig> all_pairs();
// Fallback when every pair ties or the data is too small: Matern 3/2 + EI.
PairConfig default_pair();

struct PairScore {
  PairConfig pair;
  int iterations = 0;  // t_max when the target was never reached
  bool reached_target = false;
};

enum class TieBreak { Priority, Random };

struct SelectorConfig {
  int t_max = 20;
  std::vector<PairConfig> pairs = all_pairs();
  TieBreak tie_break = TieBreak::Priority;
  PartitionConfig partition;
};

// Retrospective BO run confined to already-observed data: fit on the growing
// reference set, move the acquisition maximizer over from the query set, and
// count iterations until a value at or below the split target is found.
// Query exhaustion without reaching the target scores as t_max.
PairScore internal_bo_run(const PairConfig& pair, const PartitionSplit& split,
                          int t_max, std::uint64_t seed);

// Seed used for the internal run of cfg.pairs[pair_index] inside recommend().
std::uint64_t internal_run_seed(std::uint64_t recommend_seed, std::size_t pair_index);
// Partition configuration actually used by recommend(); the Random strategy
// draws its sample from a per-call seed rather than the fixed k-means seed.
PartitionConfig partition_config_for(const SelectorConfig& cfg, std::uint64_t seed);

// Index of the winning score: fewest iterations, ties resolved by the
// acquisition-major priority order or uniformly at random.
std::size_t pick_best(const std::vector<PairScore>& scores, TieBreak tie_break,
                      std::uint64_t seed);

// Evaluates every configured pair on a fresh partition of the data and
// returns the recommended pair. Pair runs are independent; `workers` > 1
// evaluates them concurrently with identical results.
PairConfig recommend(const ObservationSet& data, const SelectorConfig& cfg,
                     std::uint64_t seed, int workers = 1);

}  // namespace bopt

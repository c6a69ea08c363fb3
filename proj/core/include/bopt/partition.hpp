#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bopt/observation.hpp"

namespace bopt {

enum class PartitionStrategy { KMeans, Random };

struct PartitionConfig {
  int ratio_divisor = 3;
  int min_size = 3;
  int max_size = 20;
  double percentile = 5.0;
  PartitionStrategy strategy = PartitionStrategy::KMeans;
  std::uint64_t kmeans_seed = 42;
  std::uint64_t random_seed = 0;  // Random strategy only; set per trial
  // When set, replaces the percentile target (known-optimum stopping ablation).
  std::optional<double> target_override;
};

struct PartitionSplit {
  ObservationSet reference;  // seeds the internal GP fits
  ObservationSet query;      // treated as unexplored during internal runs
  double y_target = 0.0;
};

// p-th percentile (minimization: "top" means lowest) via linear interpolation
// on the sorted values at rank p/100 * (n-1).
double compute_target(std::vector<double> values, double percentile);

// Splits the data-in-hand into reference and query sets. The reference set
// holds the clamped-size selection of representative points with objective
// above the target; the query set is everything else, in data order.
PartitionSplit make_partition(const ObservationSet& data, const PartitionConfig& cfg);

}  // namespace bopt

#include "bopt/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bopt/common.hpp"
#include "bopt/kmeans.hpp"

namespace bopt {

namespace {

Eigen::MatrixXd rows_of(const ObservationSet& data, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd m(idx.size(), data.empty() ? 0 : data.front().x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) m.row(i) = data[idx[i]].x;
  return m;
}

}  // namespace

double compute_target(std::vector<double> values, double percentile) {
  if (values.empty()) {
    throw std::invalid_argument("compute_target: empty value list");
  }
  if (!(percentile > 0.0) || percentile > 100.0) {
    throw std::invalid_argument("compute_target: percentile must be in (0, 100]");
  }
  std::sort(values.begin(), values.end());
  const double rank = percentile / 100.0 * double(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  const double frac = rank - double(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

PartitionSplit make_partition(const ObservationSet& data, const PartitionConfig& cfg) {
  const std::size_t n = data.size();
  if (n < 4) {
    throw std::invalid_argument("make_partition: need at least 4 observations");
  }
  if (cfg.min_size > cfg.max_size) {
    throw std::invalid_argument("make_partition: min_size > max_size");
  }
  if (cfg.ratio_divisor < 1) {
    throw std::invalid_argument("make_partition: ratio_divisor must be positive");
  }

  std::size_t n_init = n / static_cast<std::size_t>(cfg.ratio_divisor);
  n_init = std::clamp(n_init, static_cast<std::size_t>(cfg.min_size),
                      static_cast<std::size_t>(cfg.max_size));
  n_init = std::min(n_init, n - 1);  // the query set must stay nonempty

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = data[i].y;
  const double y_target =
      cfg.target_override ? *cfg.target_override : compute_target(values, cfg.percentile);

  // Points already at or below the target are excluded from the clustering pool.
  std::vector<std::size_t> pool, excluded;
  for (std::size_t i = 0; i < n; ++i) {
    (data[i].y > y_target ? pool : excluded).push_back(i);
  }

  std::vector<std::size_t> selected;
  if (pool.size() >= n_init) {
    if (cfg.strategy == PartitionStrategy::KMeans) {
      const Eigen::MatrixXd pts = rows_of(data, pool);
      const KMeansResult km = kmeans_cluster(pts, int(n_init), cfg.kmeans_seed);
      // Each center, in index order, claims its nearest unclaimed pool point.
      std::vector<char> claimed(pool.size(), 0);
      for (std::size_t c = 0; c < n_init; ++c) {
        std::size_t best = pool.size();
        double best_d = 0.0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
          if (claimed[i]) continue;
          const double d = (pts.row(i) - km.centers.row(c)).squaredNorm();
          if (best == pool.size() || d < best_d) {
            best = i;
            best_d = d;
          }
        }
        claimed[best] = 1;
        selected.push_back(pool[best]);
      }
    } else {
      Rng rng(cfg.random_seed);
      for (std::size_t i : rng.sample_without_replacement(pool.size(), n_init)) {
        selected.push_back(pool[i]);
      }
    }
  } else {
    // Pool too small: take all of it and backfill with the worst-valued
    // excluded points so internal runs stay feasible.
    selected = pool;
    std::vector<std::size_t> fill = excluded;
    std::stable_sort(fill.begin(), fill.end(),
                     [&](std::size_t a, std::size_t b) { return data[a].y > data[b].y; });
    for (std::size_t i : fill) {
      if (selected.size() >= n_init) break;
      selected.push_back(i);
    }
  }

  std::sort(selected.begin(), selected.end());
  std::vector<char> in_reference(n, 0);
  for (std::size_t i : selected) in_reference[i] = 1;

  PartitionSplit split;
  split.y_target = y_target;
  for (std::size_t i = 0; i < n; ++i) {
    (in_reference[i] ? split.reference : split.query).push_back(data[i]);
  }
  return split;
}

}  // namespace bopt

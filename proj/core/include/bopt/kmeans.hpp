#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace bopt {

struct KMeansResult {
  std::vector<int> assignment;  // one cluster id per input row
  Eigen::MatrixXd centers;      // k x d
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding. Converges when assignments
// stabilize or after max_iterations passes. Empty clusters are reseeded at
// the point farthest from its nearest center. Deterministic given the seed.
KMeansResult kmeans_cluster(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                            int max_iterations = 300);

}  // namespace bopt

#include "bopt/kmeans.hpp"

#include <limits>
#include <stdexcept>

#include "bopt/common.hpp"

namespace bopt {

namespace {

// Squared distance from each row to its nearest chosen center.
void update_nearest_sq(const Eigen::MatrixXd& points, const Eigen::RowVectorXd& center,
                       Eigen::VectorXd& d2) {
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double d = (points.row(i) - center).squaredNorm();
    if (d < d2[i]) d2[i] = d;
  }
}

}  // namespace

KMeansResult kmeans_cluster(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                            int max_iterations) {
  const Eigen::Index n = points.rows();
  if (k < 1 || Eigen::Index(k) > n) {
    throw std::invalid_argument("kmeans_cluster: k must be in [1, n]");
  }

  Rng rng(seed);
  Eigen::MatrixXd centers(k, points.cols());
  std::vector<char> is_center(n, 0);

  // k-means++ seeding
  {
    const std::size_t first = rng.next_index(static_cast<std::size_t>(n));
    centers.row(0) = points.row(Eigen::Index(first));
    is_center[first] = 1;
    Eigen::VectorXd d2 =
        Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    update_nearest_sq(points, centers.row(0), d2);
    for (int c = 1; c < k; ++c) {
      const double total = d2.sum();
      Eigen::Index pick = -1;
      if (total > 0.0) {
        // target < total, so this always lands on a point with positive mass
        const double target = rng.next_double() * total;
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          acc += d2[i];
          if (acc > target && d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
        if (pick < 0) {
          for (Eigen::Index i = n - 1; i >= 0; --i) {
            if (d2[i] > 0.0) {
              pick = i;
              break;
            }
          }
        }
      } else {
        // all mass at zero (duplicate-heavy data): first unused point
        for (Eigen::Index i = 0; i < n; ++i) {
          if (!is_center[i]) {
            pick = i;
            break;
          }
        }
        if (pick < 0) pick = 0;
      }
      centers.row(c) = points.row(pick);
      is_center[pick] = 1;
      update_nearest_sq(points, centers.row(c), d2);
    }
  }

  KMeansResult result;
  result.assignment.assign(n, -1);

  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (points.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (result.assignment[i] != best) {
        result.assignment[i] = best;
        changed = true;
      }
    }
    result.iterations = iter + 1;
    if (!changed) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(result.assignment[i]) += points.row(i);
      ++counts[result.assignment[i]];
    }
    std::vector<char> claimed(n, 0);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / double(counts[c]);
      } else {
        // reseed an empty cluster at the unclaimed point farthest from its
        // nearest center
        Eigen::Index far = 0;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (claimed[i]) continue;
          double nearest = std::numeric_limits<double>::infinity();
          for (int c2 = 0; c2 < k; ++c2) {
            nearest = std::min(nearest, (points.row(i) - centers.row(c2)).squaredNorm());
          }
          if (nearest > far_d) {
            far_d = nearest;
            far = i;
          }
        }
        centers.row(c) = points.row(far);
        claimed[far] = 1;
      }
    }
  }

  result.centers = std::move(centers);
  return result;
}

}  // namespace bopt

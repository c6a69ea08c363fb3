#include "bopt/observation.hpp"

#include <limits>
#include <stdexcept>

namespace bopt {

Eigen::MatrixXd observation_inputs(const ObservationSet& data) {
  if (data.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd m(data.size(), data.front().x.size());
  for (std::size_t i = 0; i < data.size(); ++i) m.row(i) = data[i].x;
  return m;
}

Eigen::VectorXd observation_targets(const ObservationSet& data) {
  Eigen::VectorXd y(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) y[i] = data[i].y;
  return y;
}

double best_objective(const ObservationSet& data) {
  if (data.empty()) {
    throw std::invalid_argument("best_objective: empty observation set");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& obs : data) best = std::min(best, obs.y);
  return best;
}

}  // namespace bopt

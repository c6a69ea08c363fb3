#pragma once

#include <Eigen/Dense>
#include <vector>

namespace bopt {

// One evaluated point: input in the unit cube, recorded objective value.
struct Observation {
  Eigen::VectorXd x;
  double y = 0.0;
};

// Data-in-hand, ordered by evaluation time. Inputs are unique within a run.
using ObservationSet = std::vector<Observation>;

Eigen::MatrixXd observation_inputs(const ObservationSet& data);
Eigen::VectorXd observation_targets(const ObservationSet& data);
double best_objective(const ObservationSet& data);

}  // namespace bopt

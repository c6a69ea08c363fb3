#pragma once

#include <cstddef>
#include <string>

#include "bopt/gp.hpp"

namespace bopt {

enum class AcquisitionFamily { EI, PI, LCB, PM };

struct AcquisitionSpec {
  AcquisitionFamily family = AcquisitionFamily::EI;
  double beta = 0.1;  // LCB exploration weight
};

const char* acquisition_name(AcquisitionFamily family);
AcquisitionFamily acquisition_from_name(const std::string& name);

double normal_pdf(double z);
double normal_cdf(double z);

// Acquisition score under the minimization convention: f_best is the lowest
// observed value. Higher score means a more attractive candidate.
// sigma = 0 degenerates to: EI = max(f_best - mu, 0), PI = [mu < f_best].
double acquisition_value(const AcquisitionSpec& spec, double mu, double sigma,
                         double f_best);

// Index of the acquisition maximizer over the candidate rows; ties go to the
// lowest index.
std::size_t select_next(const AcquisitionSpec& spec, const TrainedSurrogate& surrogate,
                        const Eigen::MatrixXd& candidates, double f_best);

}  // namespace bopt

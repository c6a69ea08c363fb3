#include "bopt/acquisition.hpp"

#include <cmath>
#include <stdexcept>

namespace bopt {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kInvSqrt2 = 0.7071067811865475244;
}  // namespace

const char* acquisition_name(AcquisitionFamily family) {
  switch (family) {
    case AcquisitionFamily::EI: return "ei";
    case AcquisitionFamily::PI: return "pi";
    case AcquisitionFamily::LCB: return "lcb";
    case AcquisitionFamily::PM: return "pm";
  }
  return "?";
}

AcquisitionFamily acquisition_from_name(const std::string& name) {
  if (name == "ei") return AcquisitionFamily::EI;
  if (name == "pi") return AcquisitionFamily::PI;
  if (name == "lcb") return AcquisitionFamily::LCB;
  if (name == "pm") return AcquisitionFamily::PM;
  throw std::invalid_argument("unknown acquisition: " + name);
}

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double acquisition_value(const AcquisitionSpec& spec, double mu, double sigma,
                         double f_best) {
  switch (spec.family) {
    case AcquisitionFamily::EI: {
      if (sigma <= 0.0) return std::max(f_best - mu, 0.0);
      const double z = (f_best - mu) / sigma;
      return (f_best - mu) * normal_cdf(z) + sigma * normal_pdf(z);
    }
    case AcquisitionFamily::PI: {
      if (sigma <= 0.0) return mu < f_best ? 1.0 : 0.0;
      return normal_cdf((f_best - mu) / sigma);
    }
    case AcquisitionFamily::LCB:
      return -(mu - spec.beta * sigma);
    case AcquisitionFamily::PM:
      return -mu;
  }
  return 0.0;
}

std::size_t select_next(const AcquisitionSpec& spec, const TrainedSurrogate& surrogate,
                        const Eigen::MatrixXd& candidates, double f_best) {
  if (candidates.rows() == 0) {
    throw std::invalid_argument("select_next: empty candidate set");
  }
  Eigen::VectorXd mu, sigma2;
  predict_batch(surrogate, candidates, mu, sigma2);
  std::size_t best = 0;
  double best_value = acquisition_value(spec, mu[0], std::sqrt(sigma2[0]), f_best);
  for (Eigen::Index i = 1; i < candidates.rows(); ++i) {
    const double value = acquisition_value(spec, mu[i], std::sqrt(sigma2[i]), f_best);
    if (value > best_value) {
      best_value = value;
      best = static_cast<std::size_t>(i);
    }
  }
  return best;
}

}  // namespace bopt

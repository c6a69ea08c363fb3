#include "bopt/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace bopt {

namespace {
constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kSqrt5 = 2.2360679774997896964;
}  // namespace

const char* kernel_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::Matern32: return "matern32";
    case KernelFamily::Matern52: return "matern52";
    case KernelFamily::RBF: return "rbf";
    case KernelFamily::RQ: return "rq";
  }
  return "?";
}

KernelFamily kernel_from_name(const std::string& name) {
  if (name == "matern32") return KernelFamily::Matern32;
  if (name == "matern52") return KernelFamily::Matern52;
  if (name == "rbf") return KernelFamily::RBF;
  if (name == "rq") return KernelFamily::RQ;
  throw std::invalid_argument("unknown kernel: " + name);
}

double kernel_profile(const KernelSpec& spec, double u) {
  switch (spec.family) {
    case KernelFamily::Matern32:
      return (1.0 + kSqrt3 * u) * std::exp(-kSqrt3 * u);
    case KernelFamily::Matern52:
      return (1.0 + kSqrt5 * u + 5.0 / 3.0 * u * u) * std::exp(-kSqrt5 * u);
    case KernelFamily::RBF:
      return std::exp(-0.5 * u * u);
    case KernelFamily::RQ:
      return std::pow(1.0 + u * u / (2.0 * spec.rq_alpha), -spec.rq_alpha);
  }
  return 0.0;
}

double kernel_profile_du(const KernelSpec& spec, double u) {
  switch (spec.family) {
    case KernelFamily::Matern32:
      return -3.0 * u * std::exp(-kSqrt3 * u);
    case KernelFamily::Matern52:
      return -5.0 / 3.0 * u * (1.0 + kSqrt5 * u) * std::exp(-kSqrt5 * u);
    case KernelFamily::RBF:
      return -u * std::exp(-0.5 * u * u);
    case KernelFamily::RQ:
      return -u * std::pow(1.0 + u * u / (2.0 * spec.rq_alpha), -spec.rq_alpha - 1.0);
  }
  return 0.0;
}

double kernel_value(const KernelSpec& spec, const GPHyperparams& hp,
                    const Eigen::VectorXd& x, const Eigen::VectorXd& x2) {
  if (x.size() != x2.size()) {
    throw std::invalid_argument("kernel_value: dimension mismatch");
  }
  const double r = (x - x2).norm();
  return hp.output_scale * kernel_profile(spec, r / hp.lengthscale);
}

Eigen::MatrixXd scaled_distances(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Q,
                                 double lengthscale) {
  const Eigen::VectorXd xs = X.rowwise().squaredNorm();
  const Eigen::VectorXd qs = Q.rowwise().squaredNorm();
  Eigen::MatrixXd sq = -2.0 * (X * Q.transpose());
  sq.colwise() += xs;
  sq.rowwise() += qs.transpose();
  return sq.cwiseMax(0.0).cwiseSqrt() / lengthscale;
}

void apply_profile(const KernelSpec& spec, const Eigen::MatrixXd& U,
                   Eigen::MatrixXd& profile, Eigen::MatrixXd* dprofile) {
  const auto u = U.array();
  switch (spec.family) {
    case KernelFamily::Matern32: {
      const Eigen::ArrayXXd e = (-kSqrt3 * u).exp();
      profile = ((1.0 + kSqrt3 * u) * e).matrix();
      if (dprofile) *dprofile = (-3.0 * u * e).matrix();
      break;
    }
    case KernelFamily::Matern52: {
      const Eigen::ArrayXXd e = (-kSqrt5 * u).exp();
      profile = ((1.0 + kSqrt5 * u + 5.0 / 3.0 * u.square()) * e).matrix();
      if (dprofile) *dprofile = (-5.0 / 3.0 * u * (1.0 + kSqrt5 * u) * e).matrix();
      break;
    }
    case KernelFamily::RBF: {
      const Eigen::ArrayXXd e = (-0.5 * u.square()).exp();
      profile = e.matrix();
      if (dprofile) *dprofile = (-u * e).matrix();
      break;
    }
    case KernelFamily::RQ: {
      const double a = spec.rq_alpha;
      const Eigen::ArrayXXd base = 1.0 + u.square() / (2.0 * a);
      const Eigen::ArrayXXd pa = base.pow(-a);
      profile = pa.matrix();
      if (dprofile) *dprofile = (-u * pa / base).matrix();
      break;
    }
  }
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const GPHyperparams& hp,
                            const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd u(n, n);
  // Scalar distances on the upper triangle, mirrored, so K is exactly
  // symmetric regardless of how the BLAS path would round.
  for (Eigen::Index i = 0; i < n; ++i) {
    u(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (X.row(i) - X.row(j)).norm() / hp.lengthscale;
      u(i, j) = d;
      u(j, i) = d;
    }
  }
  Eigen::MatrixXd profile;
  apply_profile(spec, u, profile);
  return hp.output_scale * profile;
}

Eigen::MatrixXd cross_covariance(const KernelSpec& spec, const GPHyperparams& hp,
                                 const Eigen::MatrixXd& X, const Eigen::MatrixXd& Q) {
  if (X.cols() != Q.cols()) {
    throw std::invalid_argument("cross_covariance: dimension mismatch");
  }
  Eigen::MatrixXd profile;
  const Eigen::MatrixXd u = scaled_distances(X, Q, hp.lengthscale);
  apply_profile(spec, u, profile);
  return hp.output_scale * profile;
}

}  // namespace bopt

#pragma once

#include <Eigen/Dense>
#include <string>

namespace bopt {

enum class KernelFamily { Matern32, Matern52, RBF, RQ };

struct KernelSpec {
  KernelFamily family = KernelFamily::Matern32;
  double rq_alpha = 2.0;  // only read for the rational-quadratic family
};

const char* kernel_name(KernelFamily family);
KernelFamily kernel_from_name(const std::string& name);

struct GPHyperparams {
  double noise_variance = 1e-3;
  double lengthscale = 0.5;
  double output_scale = 1.0;
};

// Stationary correlation profile at scaled distance u = r / lengthscale,
// so that k(x, x') = output_scale * profile(u).
double kernel_profile(const KernelSpec& spec, double u);
// d(profile)/du; feeds the marginal-likelihood lengthscale gradient.
double kernel_profile_du(const KernelSpec& spec, double u);

double kernel_value(const KernelSpec& spec, const GPHyperparams& hp,
                    const Eigen::VectorXd& x, const Eigen::VectorXd& x2);

// Scaled pairwise distances u_ij = |x_i - q_j| / lengthscale. Rows are points.
Eigen::MatrixXd scaled_distances(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Q,
                                 double lengthscale);

// Elementwise profile over a matrix of scaled distances; optionally also the
// elementwise derivative d(profile)/du.
void apply_profile(const KernelSpec& spec, const Eigen::MatrixXd& U,
                   Eigen::MatrixXd& profile, Eigen::MatrixXd* dprofile = nullptr);

// Gram matrix without noise, exactly symmetric by construction.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const GPHyperparams& hp,
                            const Eigen::MatrixXd& X);

// Cross-covariance between training rows X and query rows Q (n x m).
Eigen::MatrixXd cross_covariance(const KernelSpec& spec, const GPHyperparams& hp,
                                 const Eigen::MatrixXd& X, const Eigen::MatrixXd& Q);

}  // namespace bopt

#pragma once

#include <cstdint>
#include <vector>

#include "bopt/kernels.hpp"

namespace bopt {

// Box constraints on the three hyperparameters. The lengthscale upper bound
// is sqrt(d), which assumes inputs normalized to the unit cube.
struct HyperparamBounds {
  double noise_lo = 5e-4, noise_hi = 0.2;
  double length_lo = 5e-6, length_hi = 1.0;
  double scale_lo = 0.05, scale_hi = 20.0;

  static HyperparamBounds for_dimension(int d);
};

struct TrainedSurrogate {
  KernelSpec kernel;
  GPHyperparams hyperparams;
  Eigen::MatrixXd train_inputs;   // n x d, unit cube
  Eigen::VectorXd train_targets;  // standardized
  Eigen::MatrixXd factor;         // lower Cholesky of K + (noise + jitter) I
  Eigen::VectorXd alpha;          // (K + (noise + jitter) I)^{-1} train_targets
  double target_mean = 0.0;
  double target_std = 1.0;
  double jitter = 0.0;  // nonzero only when the plain factorization failed
};

struct GPTrainConfig {
  double learning_rate = 0.05;
  int max_steps = 50;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

struct FitReport {
  std::vector<double> accepted_lml;  // non-decreasing by construction
  int steps = 0;
};

// Maps unconstrained optimizer coordinates into the constraint boxes via a
// scaled logistic. raw = 0 lands on the interval midpoints.
GPHyperparams constrain(const HyperparamBounds& bounds, const Eigen::Vector3d& raw);

// Log marginal likelihood of standardized targets as a function of the raw
// coordinates (order: noise, lengthscale, output scale), with gradient.
double log_marginal_likelihood(const KernelSpec& kernel, const HyperparamBounds& bounds,
                               const Eigen::Vector3d& raw, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y_std,
                               Eigen::Vector3d* grad = nullptr);

// Factorizes at fixed hyperparameters; no training. Standardizes targets.
TrainedSurrogate make_surrogate(const KernelSpec& kernel, const GPHyperparams& hp,
                                const Eigen::MatrixXd& inputs,
                                const Eigen::VectorXd& targets);

// Constrained maximum-likelihood fit: Adam ascent (lr 0.05, <= 50 steps) over
// the raw coordinates, keeping the best accepted iterate. Deterministic given
// (inputs, targets, seed).
TrainedSurrogate fit_surrogate(const KernelSpec& kernel, const Eigen::MatrixXd& inputs,
                               const Eigen::VectorXd& targets, std::uint64_t seed,
                               FitReport* report = nullptr,
                               const GPTrainConfig& cfg = GPTrainConfig{});

struct Prediction {
  double mu = 0.0;
  double sigma2 = 0.0;
};

// Posterior mean and latent variance at one point, de-standardized.
Prediction predict(const TrainedSurrogate& s, const Eigen::VectorXd& x);

// Batch posterior over the rows of Q from the cached factorization. Callers
// stream large candidate sets through this in fixed-size blocks.
void predict_batch(const TrainedSurrogate& s, const Eigen::MatrixXd& Q,
                   Eigen::VectorXd& mu, Eigen::VectorXd& sigma2);

}  // namespace bopt

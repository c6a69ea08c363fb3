#include "bopt/gp.hpp"

#include <Eigen/Cholesky>
#include <array>
#include <cmath>
#include <stdexcept>

namespace bopt {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct Interval {
  double lo, hi;
  double value(double raw) const { return lo + (hi - lo) * logistic(raw); }
  // d(value)/d(raw) expressed through the constrained value.
  double slope(double value) const { return (value - lo) * (hi - value) / (hi - lo); }
};

std::array<Interval, 3> intervals(const HyperparamBounds& b) {
  return {Interval{b.noise_lo, b.noise_hi}, Interval{b.length_lo, b.length_hi},
          Interval{b.scale_lo, b.scale_hi}};
}

// Cholesky of K + diag. Escalates jitter from 1e-8 by factors of 10 up to
// 1e-2 when the plain factorization is not positive definite.
struct Factorization {
  Eigen::MatrixXd L;
  double jitter = 0.0;
};

Factorization cholesky_with_jitter(const Eigen::MatrixXd& K, double diagonal) {
  Eigen::MatrixXd A = K;
  A.diagonal().array() += diagonal;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() == Eigen::Success) {
    return {llt.matrixL(), 0.0};
  }
  for (double jitter = 1e-8; jitter <= 1e-2 * (1.0 + 1e-12); jitter *= 10.0) {
    Eigen::MatrixXd Aj = A;
    Aj.diagonal().array() += jitter;
    llt.compute(Aj);
    if (llt.info() == Eigen::Success) {
      return {llt.matrixL(), jitter};
    }
  }
  throw std::runtime_error("gp: covariance not positive definite even with jitter 1e-2");
}

struct Standardized {
  Eigen::VectorXd y;
  double mean = 0.0;
  double std = 1.0;
};

Standardized standardize(const Eigen::VectorXd& targets) {
  Standardized out;
  const Eigen::Index n = targets.size();
  out.mean = targets.mean();
  double std = 0.0;
  if (n > 1) {
    std = std::sqrt((targets.array() - out.mean).square().sum() / double(n - 1));
  }
  out.std = std > 1e-12 ? std : 1.0;  // constant-target fallback
  out.y = (targets.array() - out.mean) / out.std;
  return out;
}

}  // namespace

HyperparamBounds HyperparamBounds::for_dimension(int d) {
  if (d < 1) throw std::invalid_argument("HyperparamBounds: dimension must be positive");
  HyperparamBounds b;
  b.length_hi = std::sqrt(static_cast<double>(d));
  return b;
}

GPHyperparams constrain(const HyperparamBounds& bounds, const Eigen::Vector3d& raw) {
  const auto iv = intervals(bounds);
  GPHyperparams hp;
  hp.noise_variance = iv[0].value(raw[0]);
  hp.lengthscale = iv[1].value(raw[1]);
  hp.output_scale = iv[2].value(raw[2]);
  return hp;
}

double log_marginal_likelihood(const KernelSpec& kernel, const HyperparamBounds& bounds,
                               const Eigen::Vector3d& raw, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y_std, Eigen::Vector3d* grad) {
  const Eigen::Index n = X.rows();
  const GPHyperparams hp = constrain(bounds, raw);

  // Scaled distances once; profile and its u-derivative from the same pass.
  Eigen::MatrixXd u(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    u(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (X.row(i) - X.row(j)).norm() / hp.lengthscale;
      u(i, j) = d;
      u(j, i) = d;
    }
  }
  Eigen::MatrixXd profile, dprofile;
  apply_profile(kernel, u, profile, grad ? &dprofile : nullptr);

  const Eigen::MatrixXd K = hp.output_scale * profile;
  const Factorization fac = cholesky_with_jitter(K, hp.noise_variance);
  const Eigen::VectorXd alpha = fac.L.triangularView<Eigen::Lower>()
                                    .transpose()
                                    .solve(fac.L.triangularView<Eigen::Lower>().solve(y_std));

  const double log_det = fac.L.diagonal().array().log().sum();
  const double lml = -0.5 * y_std.dot(alpha) - log_det - 0.5 * double(n) * kLog2Pi;

  if (grad) {
    // dLML/dtheta = 0.5 * sum( (alpha alpha^T - Kinv) .* dK/dtheta )
    Eigen::MatrixXd Kinv = Eigen::MatrixXd::Identity(n, n);
    fac.L.triangularView<Eigen::Lower>().solveInPlace(Kinv);
    fac.L.triangularView<Eigen::Lower>().transpose().solveInPlace(Kinv);
    const Eigen::MatrixXd M = alpha * alpha.transpose() - Kinv;

    const double g_noise = 0.5 * M.trace();
    const double g_scale = 0.5 * M.cwiseProduct(profile).sum();
    // dK/dlengthscale = output_scale * dprofile(u) * (-u / lengthscale)
    const double g_length =
        0.5 * (-hp.output_scale / hp.lengthscale) * M.cwiseProduct(dprofile.cwiseProduct(u)).sum();

    const auto iv = intervals(bounds);
    (*grad)[0] = g_noise * iv[0].slope(hp.noise_variance);
    (*grad)[1] = g_length * iv[1].slope(hp.lengthscale);
    (*grad)[2] = g_scale * iv[2].slope(hp.output_scale);
  }
  return lml;
}

TrainedSurrogate make_surrogate(const KernelSpec& kernel, const GPHyperparams& hp,
                                const Eigen::MatrixXd& inputs,
                                const Eigen::VectorXd& targets) {
  if (inputs.rows() != targets.size()) {
    throw std::invalid_argument("make_surrogate: inputs/targets size mismatch");
  }
  if (!targets.allFinite()) {
    throw std::invalid_argument("make_surrogate: non-finite targets");
  }
  TrainedSurrogate s;
  s.kernel = kernel;
  s.hyperparams = hp;
  s.train_inputs = inputs;
  const Standardized st = standardize(targets);
  s.train_targets = st.y;
  s.target_mean = st.mean;
  s.target_std = st.std;

  const Eigen::MatrixXd K = gram_matrix(kernel, hp, inputs);
  Factorization fac = cholesky_with_jitter(K, hp.noise_variance);
  s.factor = std::move(fac.L);
  s.jitter = fac.jitter;
  s.alpha = s.factor.triangularView<Eigen::Lower>().transpose().solve(
      s.factor.triangularView<Eigen::Lower>().solve(s.train_targets));
  return s;
}

TrainedSurrogate fit_surrogate(const KernelSpec& kernel, const Eigen::MatrixXd& inputs,
                               const Eigen::VectorXd& targets, std::uint64_t seed,
                               FitReport* report, const GPTrainConfig& cfg) {
  if (inputs.rows() < 2) {
    throw std::invalid_argument("fit_surrogate: need at least two points");
  }
  if (inputs.rows() != targets.size()) {
    throw std::invalid_argument("fit_surrogate: inputs/targets size mismatch");
  }
  if (!targets.allFinite()) {
    throw std::invalid_argument("fit_surrogate: non-finite targets");
  }
  (void)seed;  // the optimizer starts from the interval midpoints; nothing stochastic

  const HyperparamBounds bounds = HyperparamBounds::for_dimension(int(inputs.cols()));
  const Standardized st = standardize(targets);

  Eigen::Vector3d raw = Eigen::Vector3d::Zero();
  Eigen::Vector3d grad;
  double lml = log_marginal_likelihood(kernel, bounds, raw, inputs, st.y, &grad);

  Eigen::Vector3d best_raw = raw;
  double best_lml = lml;
  if (report) {
    report->accepted_lml.clear();
    report->accepted_lml.push_back(lml);
  }

  // Adam ascent over the raw coordinates. The trajectory always advances;
  // only iterates that do not decrease the objective are accepted.
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (int step = 1; step <= cfg.max_steps; ++step) {
    m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * grad;
    v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * grad.cwiseProduct(grad);
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, step);
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, step);
    const Eigen::Vector3d mhat = m / bc1;
    const Eigen::Vector3d vhat = v / bc2;
    raw += cfg.learning_rate * (mhat.array() / (vhat.array().sqrt() + cfg.adam_eps)).matrix();

    lml = log_marginal_likelihood(kernel, bounds, raw, inputs, st.y, &grad);
    if (lml >= best_lml) {
      best_lml = lml;
      best_raw = raw;
      if (report) report->accepted_lml.push_back(lml);
    }
    if (report) report->steps = step;
  }

  return make_surrogate(kernel, constrain(bounds, best_raw), inputs, targets);
}

Prediction predict(const TrainedSurrogate& s, const Eigen::VectorXd& x) {
  if (x.size() != s.train_inputs.cols()) {
    throw std::invalid_argument("predict: dimension mismatch");
  }
  const Eigen::Index n = s.train_inputs.rows();
  Eigen::VectorXd k(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = (s.train_inputs.row(i).transpose() - x).norm() / s.hyperparams.lengthscale;
    k[i] = s.hyperparams.output_scale * kernel_profile(s.kernel, u);
  }
  const Eigen::VectorXd w = s.factor.triangularView<Eigen::Lower>().solve(k);
  Prediction p;
  const double mu_std = k.dot(s.alpha);
  const double var_std = std::max(0.0, s.hyperparams.output_scale - w.squaredNorm());
  p.mu = mu_std * s.target_std + s.target_mean;
  p.sigma2 = var_std * s.target_std * s.target_std;
  return p;
}

void predict_batch(const TrainedSurrogate& s, const Eigen::MatrixXd& Q,
                   Eigen::VectorXd& mu, Eigen::VectorXd& sigma2) {
  if (Q.cols() != s.train_inputs.cols()) {
    throw std::invalid_argument("predict_batch: dimension mismatch");
  }
  const Eigen::MatrixXd Kx = cross_covariance(s.kernel, s.hyperparams, s.train_inputs, Q);
  const Eigen::MatrixXd W = s.factor.triangularView<Eigen::Lower>().solve(Kx);
  mu = (Kx.transpose() * s.alpha) * s.target_std;
  mu.array() += s.target_mean;
  sigma2 = (s.hyperparams.output_scale - W.colwise().squaredNorm().transpose().array())
               .max(0.0)
               .matrix() *
           (s.target_std * s.target_std);
}

}  // namespace bopt

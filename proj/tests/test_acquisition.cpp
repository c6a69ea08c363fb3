#include <doctest.h>

#include "bopt/acquisition.hpp"
#include "bopt/common.hpp"
#include "test_oracles.hpp"

using namespace bopt;

TEST_CASE("closed-form spot values") {
  SUBCASE("EI at mu = f_best with unit sigma equals the normal density at 0") {
    CHECK(acquisition_value({AcquisitionFamily::EI}, 0.0, 1.0, 0.0) ==
          doctest::Approx(0.39894228040143268).epsilon(1e-13));
  }
  SUBCASE("PI at mu = f_best is one half") {
    CHECK(acquisition_value({AcquisitionFamily::PI}, 1.7, 1.0, 1.7) ==
          doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("PM negates the mean") {
    CHECK(acquisition_value({AcquisitionFamily::PM}, 3.7, 0.4, 0.0) == -3.7);
  }
  SUBCASE("LCB with beta") {
    AcquisitionSpec lcb{AcquisitionFamily::LCB, 0.1};
    CHECK(acquisition_value(lcb, 2.0, 1.0, 0.0) == doctest::Approx(-(2.0 - 0.1)));
  }
}

TEST_CASE("degenerate sigma limits") {
  CHECK(acquisition_value({AcquisitionFamily::EI}, 1.0, 0.0, 3.0) == 2.0);
  CHECK(acquisition_value({AcquisitionFamily::EI}, 3.0, 0.0, 3.0) == 0.0);
  CHECK(acquisition_value({AcquisitionFamily::EI}, 5.0, 0.0, 3.0) == 0.0);
  CHECK(acquisition_value({AcquisitionFamily::PI}, 1.0, 0.0, 3.0) == 1.0);
  CHECK(acquisition_value({AcquisitionFamily::PI}, 3.0, 0.0, 3.0) == 0.0);
  CHECK(acquisition_value({AcquisitionFamily::PI}, 5.0, 0.0, 3.0) == 0.0);
}

TEST_CASE("EI and PI match direct quadrature") {
  Rng rng(21);
  for (int rep = 0; rep < 25; ++rep) {
    const double mu = 4.0 * rng.next_double() - 2.0;
    const double sigma = 0.05 + 2.0 * rng.next_double();
    const double f_best = 4.0 * rng.next_double() - 2.0;
    CHECK(acquisition_value({AcquisitionFamily::EI}, mu, sigma, f_best) ==
          doctest::Approx(oracle::ei_by_quadrature(mu, sigma, f_best)).epsilon(1e-6));
    CHECK(acquisition_value({AcquisitionFamily::PI}, mu, sigma, f_best) ==
          doctest::Approx(oracle::pi_by_quadrature(mu, sigma, f_best)).epsilon(1e-6));
  }
}

TEST_CASE("EI is nonnegative and non-increasing in mu") {
  Rng rng(33);
  for (int rep = 0; rep < 200; ++rep) {
    const double sigma = rng.next_double() * 2.0;
    const double f_best = 4.0 * rng.next_double() - 2.0;
    const double mu1 = 4.0 * rng.next_double() - 2.0;
    const double mu2 = mu1 + rng.next_double();
    const double e1 = acquisition_value({AcquisitionFamily::EI}, mu1, sigma, f_best);
    const double e2 = acquisition_value({AcquisitionFamily::EI}, mu2, sigma, f_best);
    CHECK(e1 >= 0.0);
    CHECK(e2 <= e1 + 1e-12);
    const double p1 = acquisition_value({AcquisitionFamily::PI}, mu1, sigma, f_best);
    const double p2 = acquisition_value({AcquisitionFamily::PI}, mu2, sigma, f_best);
    CHECK(p2 <= p1 + 1e-12);
  }
}

TEST_CASE("LCB and PM argmax indices are invariant to a constant mean shift") {
  Rng rng(55);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 3 + int(rng.next_index(8));
    std::vector<double> mu(n), sigma(n);
    for (int i = 0; i < n; ++i) {
      mu[i] = 4.0 * rng.next_double() - 2.0;
      sigma[i] = rng.next_double();
    }
    const double shift = 10.0 * rng.next_double() - 5.0;
    for (auto family : {AcquisitionFamily::LCB, AcquisitionFamily::PM}) {
      AcquisitionSpec spec{family, 0.1};
      int arg1 = 0, arg2 = 0;
      double best1 = -1e300, best2 = -1e300;
      for (int i = 0; i < n; ++i) {
        const double v1 = acquisition_value(spec, mu[i], sigma[i], 0.0);
        const double v2 = acquisition_value(spec, mu[i] + shift, sigma[i], 0.0);
        if (v1 > best1) { best1 = v1; arg1 = i; }
        if (v2 > best2) { best2 = v2; arg2 = i; }
      }
      CHECK(arg1 == arg2);
    }
  }
}

namespace {

TrainedSurrogate toy_surrogate(Rng& rng, int n = 8) {
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = rng.next_double();
    X(i, 1) = rng.next_double();
    y[i] = std::sin(5.0 * X(i, 0)) + X(i, 1);
  }
  return fit_surrogate({KernelFamily::Matern52}, X, y, 0);
}

Eigen::MatrixXd random_candidates(Rng& rng, int m) {
  Eigen::MatrixXd Q(m, 2);
  for (int i = 0; i < m; ++i) {
    Q(i, 0) = rng.next_double();
    Q(i, 1) = rng.next_double();
  }
  return Q;
}

}  // namespace

TEST_CASE("select_next equals an exhaustive pointwise oracle") {
  Rng rng(77);
  const auto s = toy_surrogate(rng);
  const auto Q = random_candidates(rng, 5);
  const double f_best = 0.2;
  for (auto family :
       {AcquisitionFamily::EI, AcquisitionFamily::PI, AcquisitionFamily::LCB,
        AcquisitionFamily::PM}) {
    AcquisitionSpec spec{family, 0.1};
    std::size_t expect = 0;
    double best = -1e300;
    for (int i = 0; i < Q.rows(); ++i) {
      const auto p = predict(s, Q.row(i).transpose());
      const double v = acquisition_value(spec, p.mu, std::sqrt(p.sigma2), f_best);
      if (v > best) {
        best = v;
        expect = std::size_t(i);
      }
    }
    CHECK(select_next(spec, s, Q, f_best) == expect);
  }
}

TEST_CASE("LCB with beta zero selects exactly like PM") {
  Rng rng(101);
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = toy_surrogate(rng);
    const auto Q = random_candidates(rng, 40);
    const double f_best = -0.5 + rng.next_double();
    CHECK(select_next({AcquisitionFamily::LCB, 0.0}, s, Q, f_best) ==
          select_next({AcquisitionFamily::PM}, s, Q, f_best));
  }
}

TEST_CASE("ties resolve to the lowest index") {
  Rng rng(13);
  const auto s = toy_surrogate(rng);
  Eigen::MatrixXd Q(4, 2);
  Q << 0.4, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4;  // identical candidates
  for (auto family : {AcquisitionFamily::EI, AcquisitionFamily::PM}) {
    CHECK(select_next({family}, s, Q, 0.0) == 0);
  }
}

TEST_CASE("empty candidate set is rejected") {
  Rng rng(14);
  const auto s = toy_surrogate(rng);
  Eigen::MatrixXd Q(0, 2);
  CHECK_THROWS_AS(select_next({AcquisitionFamily::EI}, s, Q, 0.0), std::invalid_argument);
}

TEST_CASE("select_next is pure") {
  Rng rng(15);
  const auto s = toy_surrogate(rng);
  const auto Q = random_candidates(rng, 25);
  const auto first = select_next({AcquisitionFamily::EI}, s, Q, 0.1);
  for (int rep = 0; rep < 5; ++rep) {
    CHECK(select_next({AcquisitionFamily::EI}, s, Q, 0.1) == first);
  }
}

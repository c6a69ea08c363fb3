#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "bopt/common.hpp"
#include "bopt/tasks.hpp"

using namespace bopt;

namespace {

Eigen::VectorXd vec4(double a, double b, double c, double d) {
  Eigen::VectorXd v(4);
  v << a, b, c, d;
  return v;
}

// independent long double formula evaluation
long double formula_ld(SyntheticFunction f, const std::vector<long double>& x) {
  const std::size_t d = x.size();
  const long double pi = 3.14159265358979323846264338L;
  switch (f) {
    case SyntheticFunction::Ackley: {
      long double sq = 0.0L, cs = 0.0L;
      for (long double xi : x) {
        sq += xi * xi;
        cs += cosl(2.0L * pi * xi);
      }
      return -20.0L * expl(-0.2L * sqrtl(sq / d)) - expl(cs / d) + 20.0L + expl(1.0L);
    }
    case SyntheticFunction::Levy: {
      auto w = [&](std::size_t i) { return 1.0L + (x[i] - 1.0L) / 4.0L; };
      long double s = sinl(pi * w(0));
      long double sum = s * s;
      for (std::size_t i = 0; i + 1 < d; ++i) {
        const long double wi = w(i);
        const long double si = sinl(pi * wi + 1.0L);
        sum += (wi - 1.0L) * (wi - 1.0L) * (1.0L + 10.0L * si * si);
      }
      const long double wd = w(d - 1);
      const long double sd = sinl(2.0L * pi * wd);
      return sum + (wd - 1.0L) * (wd - 1.0L) * (1.0L + sd * sd);
    }
    case SyntheticFunction::Rosenbrock: {
      long double sum = 0.0L;
      for (std::size_t i = 0; i + 1 < d; ++i) {
        const long double t1 = x[i + 1] - x[i] * x[i];
        const long double t2 = 1.0L - x[i];
        sum += 100.0L * t1 * t1 + t2 * t2;
      }
      return sum;
    }
    case SyntheticFunction::SumSquares: {
      long double sum = 0.0L;
      for (std::size_t i = 0; i < d; ++i) sum += (long double)(i + 1) * x[i] * x[i];
      return sum;
    }
  }
  return 0.0L;
}

}  // namespace

TEST_CASE("formula values at the canonical optima") {
  CHECK(std::abs(eval_formula(SyntheticFunction::Ackley, vec4(0, 0, 0, 0))) <= 1e-12);
  CHECK(std::abs(eval_formula(SyntheticFunction::Levy, vec4(1, 1, 1, 1))) <= 1e-12);
  CHECK(eval_formula(SyntheticFunction::Rosenbrock, vec4(1, 1, 1, 1)) == 0.0);
  CHECK(eval_formula(SyntheticFunction::SumSquares, vec4(1, 1, 1, 1)) ==
        doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("formulas agree with the long double reference on random grid points") {
  const auto grids = build_standard_grids();
  Rng rng(2);
  for (const auto& [name, task] : grids) {
    for (int rep = 0; rep < 100; ++rep) {
      const std::size_t flat = rng.next_index(task->size());
      std::vector<int> idx;
      task->space().decode(flat, idx);
      Eigen::VectorXd x(4);
      std::vector<long double> xl(4);
      for (int a = 0; a < 4; ++a) {
        x[a] = task->space().axes[a][idx[a]];
        xl[a] = x[a];
      }
      const double expected = double(formula_ld(task->function(), xl));
      const double got = task->evaluate(flat);
      CHECK(std::abs(got - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("standard grids match their published axes") {
  const auto grids = build_standard_grids();

  const auto& ackley = grids.at("ackley");
  const auto& axis = ackley->space().axes[0];
  CHECK(axis.size() == 41);
  CHECK(axis.front() == -31.5);
  CHECK(axis.back() == 31.5);
  for (std::size_t i = 1; i < axis.size(); ++i) {
    CHECK(axis[i] - axis[i - 1] == doctest::Approx(63.0 / 40.0).epsilon(1e-12));
  }
  CHECK(ackley->dimension() == 4);
  CHECK(ackley->size() == 41u * 41u * 41u * 41u);

  const auto& rosen = grids.at("rosenbrock");
  CHECK(rosen->space().axes[0].size() == 31);
  CHECK(rosen->space().axes[0].front() == -5.0);
  CHECK(rosen->space().axes[0].back() == 10.0);
  CHECK(rosen->space().locate_axis(0, 1.0) >= 0);  // step 0.5 passes through 1

  const auto& levy = grids.at("levy");
  CHECK(levy->space().axes[0].size() == 31);
  CHECK(levy->space().axes[0].front() == -10.0);
  CHECK(levy->space().axes[0].back() == 10.0);

  const auto& sums = grids.at("sumsquares");
  CHECK(sums->space().axes[0].size() == 31);
  CHECK(sums->space().locate_axis(0, 0.0) >= 0);
  CHECK(sums->optimum() == 0.0);
}

TEST_CASE("grid optima equal the exhaustive grid minimum") {
  const auto grids = build_standard_grids();

  // levy's continuous minimizer is off-grid; scan the full grid independently
  const auto& levy = grids.at("levy");
  long double best = 1e30L;
  const auto& ax = levy->space().axes[0];
  for (double a : ax)
    for (double b : ax)
      for (double c : ax)
        for (double d : ax) {
          best = std::min(best, formula_ld(SyntheticFunction::Levy, {a, b, c, d}));
        }
  CHECK(levy->optimum() == doctest::Approx(double(best)).epsilon(1e-12));
  CHECK(levy->optimum() == doctest::Approx(0.19084962644891124).epsilon(1e-9));

  CHECK(std::abs(grids.at("ackley")->optimum()) <= 1e-12);
  CHECK(grids.at("rosenbrock")->optimum() == 0.0);
}

TEST_CASE("on-grid evaluation and off-grid rejection") {
  const auto grids = build_standard_grids();
  const auto& rosen = grids.at("rosenbrock");
  CHECK(eval_synthetic(*rosen, vec4(1, 1, 1, 1)) == 0.0);
  CHECK_THROWS_AS(eval_synthetic(*rosen, vec4(1.01, 1, 1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(eval_synthetic(*rosen, vec4(100, 1, 1, 1)), std::invalid_argument);

  // a levy grid that passes through the optimum
  SyntheticTask levy41(SyntheticFunction::Levy, DiscreteSearchSpace::uniform(-10, 10, 41, 4),
                       "levy41");
  CHECK(std::abs(eval_synthetic(levy41, vec4(1, 1, 1, 1))) <= 1e-12);
  CHECK(std::abs(levy41.optimum()) <= 1e-12);

  SyntheticTask sums21(SyntheticFunction::SumSquares,
                       DiscreteSearchSpace::uniform(-10, 10, 21, 4), "sums21");
  CHECK(eval_synthetic(sums21, vec4(1, 1, 1, 1)) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("flat indexing round-trips through native coordinates") {
  SyntheticTask task(SyntheticFunction::SumSquares, DiscreteSearchSpace::uniform(-2, 2, 5, 3),
                     "toy");
  for (std::size_t flat = 0; flat < task.size(); ++flat) {
    std::vector<int> idx;
    task.space().decode(flat, idx);
    Eigen::VectorXd x(3);
    for (int a = 0; a < 3; ++a) x[a] = task.space().axes[a][idx[a]];
    CHECK(task.index_of(x) == flat);
  }
  // normalized points live in the unit cube
  for (std::size_t flat = 0; flat < task.size(); ++flat) {
    const auto p = task.point_normalized(flat);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.maxCoeff() <= 1.0);
  }
}

TEST_CASE("tabular loading") {
  SUBCASE("two-point min-max normalization") {
    const auto task = load_tabular({{{0.0}, 2.0}, {{10.0}, 4.0}});
    REQUIRE(task.size() == 2);
    CHECK(task.keys()[0][0] == 0.0);
    CHECK(task.keys()[1][0] == 1.0);
    CHECK(task.evaluate(0) == 0.0);
    CHECK(task.evaluate(1) == 1.0);
    CHECK(task.optimum() == 0.0);
  }
  SUBCASE("rounding to 1e-5 collapses near-duplicates under explicit bounds") {
    const std::vector<std::pair<double, double>> bounds = {{0.0, 1.0}};
    const auto task = load_tabular({{{0.000001}, 1.0}, {{0.000004}, 3.0}, {{0.9}, 5.0}},
                                   "t", bounds);
    REQUIRE(task.size() == 2);  // the first two rows share the rounded key 0.0
    CHECK(task.keys()[0][0] == 0.0);
    CHECK(task.keys()[1][0] == 0.9);
    // averaged raw objective (1+3)/2 = 2, then min-max over {2, 5}
    CHECK(task.evaluate(0) == 0.0);
    CHECK(task.evaluate(1) == 1.0);
  }
  SUBCASE("duplicate keys average raw objectives before normalization") {
    const auto task = load_tabular(
        {{{0.0}, 1.0}, {{0.0}, 2.0}, {{0.0}, 3.0}, {{0.5}, 0.0}, {{1.0}, 4.0}});
    REQUIRE(task.size() == 3);
    // averaged value 2 normalizes to (2 - 0) / (4 - 0)
    CHECK(task.evaluate(task.index_of(Eigen::VectorXd::Zero(1))) == doctest::Approx(0.5));
  }
  SUBCASE("constant axes normalize to zero") {
    const auto task = load_tabular({{{5.0, 1.0}, 0.0}, {{5.0, 2.0}, 1.0}});
    REQUIRE(task.size() == 2);
    CHECK(task.keys()[0][0] == 0.0);
    CHECK(task.keys()[1][0] == 0.0);
  }
  SUBCASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(load_tabular({}), std::invalid_argument);
    CHECK_THROWS_AS(load_tabular({{{1.0}, 0.0}}), std::invalid_argument);
  }
  SUBCASE("keys are unique and inside the unit cube") {
    Rng rng(6);
    std::vector<TabularRow> rows;
    for (int i = 0; i < 200; ++i) {
      rows.push_back({{10 * rng.next_double() - 5, 3 * rng.next_double()},
                      20 * rng.next_double() - 10});
    }
    const auto task = load_tabular(rows);
    std::set<std::pair<double, double>> seen;
    for (const auto& k : task.keys()) {
      CHECK(k.minCoeff() >= 0.0);
      CHECK(k.maxCoeff() <= 1.0);
      CHECK(seen.insert({k[0], k[1]}).second);
    }
    for (std::size_t i = 0; i < task.size(); ++i) {
      CHECK(task.evaluate(i) >= 0.0);
      CHECK(task.evaluate(i) <= 1.0);
    }
  }
}

TEST_CASE("latin hypercube design") {
  SUBCASE("unit samples stratify every axis") {
    Rng rng(3);
    const int n = 10;
    const auto samples = lhs_unit_samples(3, n, rng);
    REQUIRE(samples.size() == n);
    for (int axis = 0; axis < 3; ++axis) {
      std::set<int> strata;
      for (const auto& s : samples) {
        CHECK(s[axis] >= 0.0);
        CHECK(s[axis] < 1.0);
        strata.insert(int(s[axis] * n));
      }
      CHECK(strata.size() == n);  // exactly one sample per stratum
    }
  }
  SUBCASE("standard grid design yields distinct on-grid points") {
    const auto space = DiscreteSearchSpace::uniform(-31.5, 31.5, 41, 4);
    const auto design = lhs_initial_design(space, 10, 0);
    REQUIRE(design.size() == 10);
    std::set<std::vector<double>> seen;
    for (const auto& p : design) {
      for (int a = 0; a < 4; ++a) CHECK(space.locate_axis(a, p[a]) >= 0);
      CHECK(seen.insert({p[0], p[1], p[2], p[3]}).second);
    }
  }
  SUBCASE("single sample") {
    const auto space = DiscreteSearchSpace::uniform(0, 1, 5, 2);
    const auto design = lhs_initial_design(space, 1, 9);
    REQUIRE(design.size() == 1);
    CHECK(space.locate_axis(0, design[0][0]) >= 0);
  }
  SUBCASE("collision repair fills a tiny grid completely") {
    const auto space = DiscreteSearchSpace::uniform(0, 1, 3, 1);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto design = lhs_initial_design(space, 3, seed);
      std::set<double> seen;
      for (const auto& p : design) seen.insert(p[0]);
      CHECK(seen.size() == 3);
    }
  }
  SUBCASE("deterministic for equal seeds") {
    const auto space = DiscreteSearchSpace::uniform(-10, 10, 31, 4);
    const auto a = lhs_initial_design(space, 10, 4);
    const auto b = lhs_initial_design(space, 10, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
  SUBCASE("overfull designs are rejected") {
    const auto space = DiscreteSearchSpace::uniform(0, 1, 2, 1);
    CHECK_THROWS_AS(lhs_initial_design(space, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(lhs_initial_design(space, 0, 0), std::invalid_argument);
  }
}

TEST_CASE("random tabular design") {
  Rng rng(12);
  std::vector<TabularRow> rows;
  for (int i = 0; i < 50; ++i) rows.push_back({{double(i)}, rng.next_double()});
  const auto task = load_tabular(rows);

  SUBCASE("sampling all rows returns every key") {
    const auto design = random_initial_design(task, int(task.size()), 1);
    std::set<double> seen;
    for (const auto& p : design) seen.insert(p[0]);
    CHECK(seen.size() == task.size());
  }
  SUBCASE("distinct and deterministic") {
    const auto a = random_initial_design(task, 10, 7);
    const auto b = random_initial_design(task, 10, 7);
    REQUIRE(a.size() == 10);
    std::set<double> seen;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i] == b[i]);
      seen.insert(a[i][0]);
    }
    CHECK(seen.size() == 10);
  }
  SUBCASE("oversampling is rejected") {
    CHECK_THROWS_AS(random_initial_design(task, int(task.size()) + 1, 0),
                    std::invalid_argument);
  }
}

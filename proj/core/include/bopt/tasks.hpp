#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bopt/common.hpp"

namespace bopt {

// Product grid: one sorted, strictly increasing value list per axis.
struct DiscreteSearchSpace {
  std::vector<std::vector<double>> axes;

  int dimension() const { return int(axes.size()); }
  std::size_t size() const;
  void validate() const;  // every axis needs >= 2 strictly increasing values

  static DiscreteSearchSpace uniform(double lo, double hi, int points, int dim);

  // Row-major flat index layout: axis 0 varies slowest.
  void decode(std::size_t flat, std::vector<int>& idx) const;
  std::size_t encode(const std::vector<int>& idx) const;

  // Nearest axis value to a raw coordinate; ties go to the lower value.
  int snap_axis(int axis, double value) const;
  // Exact on-grid axis index of a raw coordinate, or -1.
  int locate_axis(int axis, double value, double tol = 1e-9) const;
};

enum class SyntheticFunction { Ackley, Levy, Rosenbrock, SumSquares };

const char* synthetic_name(SyntheticFunction f);
// Raw benchmark formula, no grid membership check.
double eval_formula(SyntheticFunction f, const Eigen::VectorXd& x);

// A finite candidate set with a recorded objective per point. Candidates are
// addressed by flat index; `fill_point` yields unit-cube coordinates for the
// surrogate while `index_of` accepts native coordinates (grid values or
// normalized table keys).
class DiscreteTask {
 public:
  virtual ~DiscreteTask() = default;
  virtual const std::string& name() const = 0;
  virtual int dimension() const = 0;
  virtual std::size_t size() const = 0;
  virtual void fill_point(std::size_t idx, double* out) const = 0;
  virtual double evaluate(std::size_t idx) const = 0;
  virtual double optimum() const = 0;
  virtual std::size_t index_of(const Eigen::VectorXd& x) const = 0;

  Eigen::VectorXd point_normalized(std::size_t idx) const {
    Eigen::VectorXd p(dimension());
    fill_point(idx, p.data());
    return p;
  }
};

class SyntheticTask final : public DiscreteTask {
 public:
  SyntheticTask(SyntheticFunction function, DiscreteSearchSpace space, std::string name);

  const std::string& name() const override { return name_; }
  int dimension() const override { return space_.dimension(); }
  std::size_t size() const override { return space_.size(); }
  void fill_point(std::size_t idx, double* out) const override;
  double evaluate(std::size_t idx) const override;
  double optimum() const override { return known_optimum_; }
  std::size_t index_of(const Eigen::VectorXd& x) const override;

  SyntheticFunction function() const { return function_; }
  const DiscreteSearchSpace& space() const { return space_; }

 private:
  SyntheticFunction function_;
  DiscreteSearchSpace space_;
  std::string name_;
  double known_optimum_;
};

// Formula value at a raw point that must lie on the task grid.
double eval_synthetic(const SyntheticTask& task, const Eigen::VectorXd& x);

// The four standard 4-d benchmark grids, keyed by name: ackley on
// [-31.5, 31.5] with 41 points per axis, levy on [-10, 10] with 31,
// rosenbrock on [-5, 10] with 31, sumsquares on [-10, 10] with 31.
std::map<std::string, std::shared_ptr<const SyntheticTask>> build_standard_grids();

struct TabularRow {
  std::vector<double> x;
  double y = 0.0;
};

// Lookup task over preprocessed rows: inputs min-max normalized per axis,
// rounded to 1e-5, duplicates averaged; objectives averaged before being
// min-max normalized themselves.
class TabularTask final : public DiscreteTask {
 public:
  TabularTask(std::string name, std::vector<Eigen::VectorXd> keys, std::vector<double> values);

  const std::string& name() const override { return name_; }
  int dimension() const override { return dimension_; }
  std::size_t size() const override { return keys_.size(); }
  void fill_point(std::size_t idx, double* out) const override;
  double evaluate(std::size_t idx) const override;
  double optimum() const override { return optimum_; }
  std::size_t index_of(const Eigen::VectorXd& x) const override;

  const std::vector<Eigen::VectorXd>& keys() const { return keys_; }

 private:
  std::string name_;
  int dimension_;
  std::vector<Eigen::VectorXd> keys_;  // sorted lexicographically
  std::vector<double> values_;
  double optimum_;
};

// Normalization bounds default to the observed per-axis min/max; callers with
// a known search space can pass explicit (lo, hi) pairs instead.
TabularTask load_tabular(
    const std::vector<TabularRow>& rows, std::string name = "table",
    const std::optional<std::vector<std::pair<double, double>>>& input_bounds = std::nullopt);

// Delimited text with header "x1,...,xd,y", one raw observation per line.
TabularTask load_tabular_file(const std::string& path);

// n unit-cube samples, one per axis stratum with seeded per-axis permutations.
std::vector<Eigen::VectorXd> lhs_unit_samples(int dim, int n, Rng& rng);

// Latin hypercube design snapped to the grid, with nearest-unused repair for
// snap collisions. Returns raw grid coordinates.
std::vector<Eigen::VectorXd> lhs_initial_design(const DiscreteSearchSpace& space, int n,
                                                std::uint64_t seed);

// Uniform sample of table keys without replacement.
std::vector<Eigen::VectorXd> random_initial_design(const TabularTask& task, int n,
                                                   std::uint64_t seed);

}  // namespace bopt

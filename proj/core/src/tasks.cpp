#include "bopt/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bopt {

namespace {

constexpr double kPi = 3.141592653589793238;
constexpr double kE = 2.718281828459045235;

double round5(double v) { return std::round(v * 1e5) / 1e5; }

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

std::size_t DiscreteSearchSpace::size() const {
  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.size();
  return total;
}

void DiscreteSearchSpace::validate() const {
  if (axes.empty()) throw std::invalid_argument("search space: no axes");
  for (const auto& axis : axes) {
    if (axis.size() < 2) throw std::invalid_argument("search space: axis needs >= 2 values");
    for (std::size_t i = 1; i < axis.size(); ++i) {
      if (!(axis[i] > axis[i - 1])) {
        throw std::invalid_argument("search space: axis values must increase strictly");
      }
    }
  }
}

DiscreteSearchSpace DiscreteSearchSpace::uniform(double lo, double hi, int points, int dim) {
  if (points < 2 || dim < 1 || !(hi > lo)) {
    throw std::invalid_argument("search space: bad uniform grid parameters");
  }
  std::vector<double> axis(points);
  const double span = hi - lo;
  for (int i = 0; i < points; ++i) {
    axis[i] = lo + span * (double(i) / double(points - 1));
  }
  DiscreteSearchSpace space;
  space.axes.assign(dim, axis);
  return space;
}

void DiscreteSearchSpace::decode(std::size_t flat, std::vector<int>& idx) const {
  idx.resize(axes.size());
  for (int a = int(axes.size()) - 1; a >= 0; --a) {
    const std::size_t m = axes[a].size();
    idx[a] = int(flat % m);
    flat /= m;
  }
}

std::size_t DiscreteSearchSpace::encode(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    flat = flat * axes[a].size() + std::size_t(idx[a]);
  }
  return flat;
}

int DiscreteSearchSpace::snap_axis(int axis, double value) const {
  const auto& ax = axes[axis];
  const auto it = std::lower_bound(ax.begin(), ax.end(), value);
  if (it == ax.begin()) return 0;
  if (it == ax.end()) return int(ax.size()) - 1;
  const int hi = int(it - ax.begin());
  const int lo = hi - 1;
  return (value - ax[lo] <= ax[hi] - value) ? lo : hi;
}

int DiscreteSearchSpace::locate_axis(int axis, double value, double tol) const {
  const int i = snap_axis(axis, value);
  return std::abs(axes[axis][i] - value) <= tol ? i : -1;
}

const char* synthetic_name(SyntheticFunction f) {
  switch (f) {
    case SyntheticFunction::Ackley: return "ackley";
    case SyntheticFunction::Levy: return "levy";
    case SyntheticFunction::Rosenbrock: return "rosenbrock";
    case SyntheticFunction::SumSquares: return "sumsquares";
  }
  return "?";
}

double eval_formula(SyntheticFunction f, const Eigen::VectorXd& x) {
  const Eigen::Index d = x.size();
  switch (f) {
    case SyntheticFunction::Ackley: {
      const double a = 20.0, b = 0.2, c = 2.0 * kPi;
      const double rms = std::sqrt(x.squaredNorm() / double(d));
      double cos_mean = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) cos_mean += std::cos(c * x[i]);
      cos_mean /= double(d);
      return -a * std::exp(-b * rms) - std::exp(cos_mean) + a + kE;
    }
    case SyntheticFunction::Levy: {
      auto w = [&](Eigen::Index i) { return 1.0 + (x[i] - 1.0) / 4.0; };
      const double s1 = std::sin(kPi * w(0));
      double sum = s1 * s1;
      for (Eigen::Index i = 0; i < d - 1; ++i) {
        const double wi = w(i);
        const double s = std::sin(kPi * wi + 1.0);
        sum += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * s * s);
      }
      const double wd = w(d - 1);
      const double sd = std::sin(2.0 * kPi * wd);
      return sum + (wd - 1.0) * (wd - 1.0) * (1.0 + sd * sd);
    }
    case SyntheticFunction::Rosenbrock: {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < d - 1; ++i) {
        const double t1 = x[i + 1] - x[i] * x[i];
        const double t2 = 1.0 - x[i];
        sum += 100.0 * t1 * t1 + t2 * t2;
      }
      return sum;
    }
    case SyntheticFunction::SumSquares: {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        sum += double(i + 1) * x[i] * x[i];
      }
      return sum;
    }
  }
  return 0.0;
}

namespace {

// Canonical minimizer of the continuous function; used when it happens to
// lie on the grid, which avoids a full scan.
Eigen::VectorXd canonical_minimizer(SyntheticFunction f, int dim) {
  switch (f) {
    case SyntheticFunction::Ackley:
    case SyntheticFunction::SumSquares:
      return Eigen::VectorXd::Zero(dim);
    case SyntheticFunction::Levy:
    case SyntheticFunction::Rosenbrock:
      return Eigen::VectorXd::Ones(dim);
  }
  return Eigen::VectorXd::Zero(dim);
}

double grid_minimum(SyntheticFunction f, const DiscreteSearchSpace& space) {
  const std::size_t total = space.size();
  const int d = space.dimension();
  std::vector<int> idx(d, 0);
  Eigen::VectorXd x(d);
  for (int a = 0; a < d; ++a) x[a] = space.axes[a][0];
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t flat = 0;; ++flat) {
    best = std::min(best, eval_formula(f, x));
    if (flat + 1 == total) break;
    // odometer increment, last axis fastest
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < int(space.axes[a].size())) {
        x[a] = space.axes[a][idx[a]];
        break;
      }
      idx[a] = 0;
      x[a] = space.axes[a][0];
    }
  }
  return best;
}

}  // namespace

SyntheticTask::SyntheticTask(SyntheticFunction function, DiscreteSearchSpace space,
                             std::string name)
    : function_(function), space_(std::move(space)), name_(std::move(name)) {
  space_.validate();
  const Eigen::VectorXd m = canonical_minimizer(function_, space_.dimension());
  bool on_grid = true;
  for (int a = 0; a < space_.dimension() && on_grid; ++a) {
    on_grid = space_.locate_axis(a, m[a]) >= 0;
  }
  known_optimum_ = on_grid ? eval_formula(function_, m) : grid_minimum(function_, space_);
}

void SyntheticTask::fill_point(std::size_t idx, double* out) const {
  std::vector<int> axis_idx;
  space_.decode(idx, axis_idx);
  for (int a = 0; a < space_.dimension(); ++a) {
    const auto& ax = space_.axes[a];
    out[a] = (ax[axis_idx[a]] - ax.front()) / (ax.back() - ax.front());
  }
}

double SyntheticTask::evaluate(std::size_t idx) const {
  std::vector<int> axis_idx;
  space_.decode(idx, axis_idx);
  Eigen::VectorXd x(space_.dimension());
  for (int a = 0; a < space_.dimension(); ++a) x[a] = space_.axes[a][axis_idx[a]];
  return eval_formula(function_, x);
}

std::size_t SyntheticTask::index_of(const Eigen::VectorXd& x) const {
  if (x.size() != space_.dimension()) {
    throw std::invalid_argument("index_of: dimension mismatch");
  }
  std::vector<int> idx(space_.dimension());
  for (int a = 0; a < space_.dimension(); ++a) {
    idx[a] = space_.locate_axis(a, x[a]);
    if (idx[a] < 0) {
      throw std::invalid_argument("index_of: point not on the task grid");
    }
  }
  return space_.encode(idx);
}

double eval_synthetic(const SyntheticTask& task, const Eigen::VectorXd& x) {
  task.index_of(x);  // throws for off-grid points
  return eval_formula(task.function(), x);
}

std::map<std::string, std::shared_ptr<const SyntheticTask>> build_standard_grids() {
  std::map<std::string, std::shared_ptr<const SyntheticTask>> tasks;
  tasks["ackley"] = std::make_shared<SyntheticTask>(
      SyntheticFunction::Ackley, DiscreteSearchSpace::uniform(-31.5, 31.5, 41, 4), "ackley");
  tasks["levy"] = std::make_shared<SyntheticTask>(
      SyntheticFunction::Levy, DiscreteSearchSpace::uniform(-10.0, 10.0, 31, 4), "levy");
  tasks["rosenbrock"] = std::make_shared<SyntheticTask>(
      SyntheticFunction::Rosenbrock, DiscreteSearchSpace::uniform(-5.0, 10.0, 31, 4),
      "rosenbrock");
  tasks["sumsquares"] = std::make_shared<SyntheticTask>(
      SyntheticFunction::SumSquares, DiscreteSearchSpace::uniform(-10.0, 10.0, 31, 4),
      "sumsquares");
  return tasks;
}

TabularTask::TabularTask(std::string name, std::vector<Eigen::VectorXd> keys,
                         std::vector<double> values)
    : name_(std::move(name)), keys_(std::move(keys)), values_(std::move(values)) {
  if (keys_.empty() || keys_.size() != values_.size()) {
    throw std::invalid_argument("TabularTask: keys/values mismatch");
  }
  dimension_ = int(keys_.front().size());
  optimum_ = *std::min_element(values_.begin(), values_.end());
}

void TabularTask::fill_point(std::size_t idx, double* out) const {
  const Eigen::VectorXd& k = keys_[idx];
  std::copy(k.data(), k.data() + k.size(), out);
}

double TabularTask::evaluate(std::size_t idx) const { return values_[idx]; }

std::size_t TabularTask::index_of(const Eigen::VectorXd& x) const {
  if (x.size() != dimension_) {
    throw std::invalid_argument("index_of: dimension mismatch");
  }
  Eigen::VectorXd key = x;
  for (Eigen::Index i = 0; i < key.size(); ++i) key[i] = round5(key[i]);
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key, lex_less);
  if (it == keys_.end() || (*it - key).cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument("index_of: key not in table");
  }
  return std::size_t(it - keys_.begin());
}

TabularTask load_tabular(const std::vector<TabularRow>& rows, std::string name,
                         const std::optional<std::vector<std::pair<double, double>>>& input_bounds) {
  if (rows.empty()) throw std::invalid_argument("load_tabular: empty input");
  if (rows.size() < 2) throw std::invalid_argument("load_tabular: need at least 2 rows");
  const std::size_t d = rows.front().x.size();
  if (d == 0) throw std::invalid_argument("load_tabular: zero-dimensional rows");
  for (const auto& r : rows) {
    if (r.x.size() != d) throw std::invalid_argument("load_tabular: ragged rows");
    if (!std::isfinite(r.y)) throw std::invalid_argument("load_tabular: non-finite objective");
    for (double v : r.x) {
      if (!std::isfinite(v)) throw std::invalid_argument("load_tabular: non-finite input");
    }
  }
  if (input_bounds && input_bounds->size() != d) {
    throw std::invalid_argument("load_tabular: bounds/dimension mismatch");
  }

  std::vector<double> lo(d), hi(d);
  for (std::size_t a = 0; a < d; ++a) {
    if (input_bounds) {
      lo[a] = (*input_bounds)[a].first;
      hi[a] = (*input_bounds)[a].second;
    } else {
      lo[a] = hi[a] = rows.front().x[a];
      for (const auto& r : rows) {
        lo[a] = std::min(lo[a], r.x[a]);
        hi[a] = std::max(hi[a], r.x[a]);
      }
    }
  }

  // Normalize, round to 1e-5, group duplicates, average raw objectives.
  std::map<std::vector<double>, std::pair<double, int>> grouped;
  for (const auto& r : rows) {
    std::vector<double> key(d);
    for (std::size_t a = 0; a < d; ++a) {
      const double span = hi[a] - lo[a];
      const double v = span > 0.0 ? (r.x[a] - lo[a]) / span : 0.0;  // constant axis -> 0
      key[a] = round5(std::clamp(v, 0.0, 1.0));
    }
    auto& slot = grouped[key];
    slot.first += r.y;
    slot.second += 1;
  }

  std::vector<Eigen::VectorXd> keys;
  std::vector<double> values;
  keys.reserve(grouped.size());
  values.reserve(grouped.size());
  double ylo = std::numeric_limits<double>::infinity();
  double yhi = -std::numeric_limits<double>::infinity();
  for (const auto& [key, slot] : grouped) {
    Eigen::VectorXd k(d);
    for (std::size_t a = 0; a < d; ++a) k[a] = key[a];
    keys.push_back(std::move(k));
    const double mean = slot.first / double(slot.second);
    values.push_back(mean);
    ylo = std::min(ylo, mean);
    yhi = std::max(yhi, mean);
  }
  const double yspan = yhi - ylo;
  for (double& v : values) {
    v = yspan > 0.0 ? (v - ylo) / yspan : 0.0;
  }
  return TabularTask(std::move(name), std::move(keys), std::move(values));
}

TabularTask load_tabular_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_tabular_file: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("load_tabular_file: empty file " + path);
  }
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(s);
    while (std::getline(ss, field, ',')) {
      const auto b = field.find_first_not_of(" \t\r");
      const auto e = field.find_last_not_of(" \t\r");
      out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return out;
  };

  const auto header = split(line);
  if (header.size() < 2 || header.back() != "y") {
    throw std::runtime_error("load_tabular_file: expected header x1,...,xd,y in " + path);
  }
  const std::size_t d = header.size() - 1;

  std::vector<TabularRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line);
    if (fields.size() != d + 1) {
      throw std::runtime_error("load_tabular_file: wrong column count at line " +
                               std::to_string(line_no) + " of " + path);
    }
    TabularRow row;
    row.x.resize(d);
    try {
      for (std::size_t a = 0; a < d; ++a) row.x[a] = std::stod(fields[a]);
      row.y = std::stod(fields[d]);
    } catch (const std::exception&) {
      throw std::runtime_error("load_tabular_file: bad number at line " +
                               std::to_string(line_no) + " of " + path);
    }
    rows.push_back(std::move(row));
  }

  std::string name = path;
  const auto slash = name.find_last_of("/\\");
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return load_tabular(rows, name);
}

std::vector<Eigen::VectorXd> lhs_unit_samples(int dim, int n, Rng& rng) {
  if (dim < 1 || n < 1) throw std::invalid_argument("lhs_unit_samples: bad dim or n");
  std::vector<std::vector<std::size_t>> perms(dim);
  for (int a = 0; a < dim; ++a) {
    perms[a].resize(n);
    for (int i = 0; i < n; ++i) perms[a][i] = std::size_t(i);
    rng.shuffle(perms[a]);
  }
  std::vector<Eigen::VectorXd> samples(n, Eigen::VectorXd(dim));
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < dim; ++a) {
      samples[i][a] = (double(perms[a][i]) + rng.next_double()) / double(n);
    }
  }
  return samples;
}

namespace {

// Nearest unused grid point to `target`, searched over expanding Chebyshev
// rings in index space around `idx`.
std::size_t repair_collision(const DiscreteSearchSpace& space, const std::vector<int>& idx,
                             const Eigen::VectorXd& target,
                             const std::vector<char>& used) {
  const int d = space.dimension();
  int max_radius = 0;
  for (int a = 0; a < d; ++a) {
    max_radius = std::max(max_radius, int(space.axes[a].size()));
  }
  std::vector<int> offset(d), cand(d);
  for (int radius = 1; radius <= max_radius; ++radius) {
    std::size_t best_flat = 0;
    double best_d = std::numeric_limits<double>::infinity();
    bool found = false;
    // odometer over [-radius, radius]^d, keeping only the ring surface
    offset.assign(d, -radius);
    for (;;) {
      int cheb = 0;
      for (int a = 0; a < d; ++a) cheb = std::max(cheb, std::abs(offset[a]));
      if (cheb == radius) {
        bool in_bounds = true;
        for (int a = 0; a < d && in_bounds; ++a) {
          cand[a] = idx[a] + offset[a];
          in_bounds = cand[a] >= 0 && cand[a] < int(space.axes[a].size());
        }
        if (in_bounds) {
          const std::size_t flat = space.encode(cand);
          if (!used[flat]) {
            double dist2 = 0.0;
            for (int a = 0; a < d; ++a) {
              const double delta = space.axes[a][cand[a]] - target[a];
              dist2 += delta * delta;
            }
            if (!found || dist2 < best_d || (dist2 == best_d && flat < best_flat)) {
              best_flat = flat;
              best_d = dist2;
              found = true;
            }
          }
        }
      }
      int a = d - 1;
      while (a >= 0 && ++offset[a] > radius) {
        offset[a] = -radius;
        --a;
      }
      if (a < 0) break;
    }
    if (found) return best_flat;
  }
  throw std::runtime_error("lhs_initial_design: grid exhausted during repair");
}

}  // namespace

std::vector<Eigen::VectorXd> lhs_initial_design(const DiscreteSearchSpace& space, int n,
                                                std::uint64_t seed) {
  space.validate();
  if (n < 1) throw std::invalid_argument("lhs_initial_design: n must be >= 1");
  if (std::size_t(n) > space.size()) {
    throw std::invalid_argument("lhs_initial_design: n exceeds grid size");
  }
  Rng rng(seed);
  const int d = space.dimension();
  const auto samples = lhs_unit_samples(d, n, rng);

  std::vector<char> used(space.size(), 0);
  std::vector<Eigen::VectorXd> design;
  design.reserve(n);
  std::vector<int> idx(d);
  for (const auto& u : samples) {
    Eigen::VectorXd target(d);
    for (int a = 0; a < d; ++a) {
      const auto& ax = space.axes[a];
      target[a] = ax.front() + u[a] * (ax.back() - ax.front());
      idx[a] = space.snap_axis(a, target[a]);
    }
    std::size_t flat = space.encode(idx);
    if (used[flat]) {
      flat = repair_collision(space, idx, target, used);
    }
    used[flat] = 1;
    space.decode(flat, idx);
    Eigen::VectorXd point(d);
    for (int a = 0; a < d; ++a) point[a] = space.axes[a][idx[a]];
    design.push_back(std::move(point));
  }
  return design;
}

std::vector<Eigen::VectorXd> random_initial_design(const TabularTask& task, int n,
                                                   std::uint64_t seed) {
  if (n < 0 || std::size_t(n) > task.size()) {
    throw std::invalid_argument("random_initial_design: n exceeds table size");
  }
  Rng rng(seed);
  std::vector<Eigen::VectorXd> design;
  design.reserve(n);
  for (std::size_t i : rng.sample_without_replacement(task.size(), std::size_t(n))) {
    design.push_back(task.keys()[i]);
  }
  return design;
}

}  // namespace bopt

// Objective-evaluation counting shim used to verify evaluation budgets.
#pragma once

#include <mutex>
#include <vector>

#include "bopt/tasks.hpp"

namespace testutil {

class CountingTask final : public bopt::DiscreteTask {
 public:
  explicit CountingTask(const bopt::DiscreteTask& inner) : inner_(inner) {}

  const std::string& name() const override { return inner_.name(); }
  int dimension() const override { return inner_.dimension(); }
  std::size_t size() const override { return inner_.size(); }
  void fill_point(std::size_t idx, double* out) const override {
    inner_.fill_point(idx, out);
  }
  double evaluate(std::size_t idx) const override {
    std::lock_guard<std::mutex> lock(mutex_);
    evaluated_.push_back(idx);
    return inner_.evaluate(idx);
  }
  double optimum() const override { return inner_.optimum(); }
  std::size_t index_of(const Eigen::VectorXd& x) const override {
    return inner_.index_of(x);
  }

  std::vector<std::size_t> evaluated() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return evaluated_;
  }

 private:
  const bopt::DiscreteTask& inner_;
  mutable std::mutex mutex_;
  mutable std::vector<std::size_t> evaluated_;
};

}  // namespace testutil

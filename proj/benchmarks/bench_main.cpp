#include <benchmark/benchmark.h>

#include "bopt/common.hpp"
#include "bopt/driver.hpp"

using namespace bopt;

namespace {

struct Fixture {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;

  Fixture(int n, int d) : X(n, d), y(n) {
    Rng rng(17);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) X(i, j) = rng.next_double();
      y[i] = std::sin(5.0 * X(i, 0)) + 0.2 * X(i, d - 1);
    }
  }
};

Eigen::MatrixXd random_block(int m, int d, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd Q(m, d);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < d; ++j) Q(i, j) = rng.next_double();
  }
  return Q;
}

}  // namespace

static void GramMatrix(benchmark::State& state) {
  const Fixture fx(int(state.range(0)), 4);
  GPHyperparams hp;
  hp.lengthscale = 0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram_matrix({KernelFamily::Matern52}, hp, fx.X));
  }
}
BENCHMARK(GramMatrix)->Arg(16)->Arg(50)->Arg(100);

static void FitSurrogate(benchmark::State& state) {
  const Fixture fx(int(state.range(0)), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_surrogate({KernelFamily::Matern32}, fx.X, fx.y, 0));
  }
}
BENCHMARK(FitSurrogate)->Arg(10)->Arg(30)->Arg(50)->Unit(benchmark::kMillisecond);

static void PredictBatch(benchmark::State& state) {
  const Fixture fx(50, 4);
  const auto s = fit_surrogate({KernelFamily::Matern32}, fx.X, fx.y, 0);
  const auto Q = random_block(int(state.range(0)), 4, 3);
  Eigen::VectorXd mu, sigma2;
  for (auto _ : state) {
    predict_batch(s, Q, mu, sigma2);
    benchmark::DoNotOptimize(mu);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(PredictBatch)->Arg(1024)->Arg(8192)->Arg(65536);

static void MakePartition(benchmark::State& state) {
  Rng rng(5);
  ObservationSet data;
  for (int i = 0; i < int(state.range(0)); ++i) {
    Eigen::VectorXd x(4);
    for (int j = 0; j < 4; ++j) x[j] = rng.next_double();
    data.push_back({x, rng.next_double()});
  }
  PartitionConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_partition(data, cfg));
  }
}
BENCHMARK(MakePartition)->Arg(30)->Arg(100);

static void InternalRun(benchmark::State& state) {
  Rng rng(6);
  ObservationSet data;
  for (int i = 0; i < 30; ++i) {
    Eigen::VectorXd x(4);
    for (int j = 0; j < 4; ++j) x[j] = rng.next_double();
    data.push_back({x, std::sin(4.0 * x[0]) + x[1]});
  }
  PartitionConfig pcfg;
  const auto split = make_partition(data, pcfg);
  const auto pair = default_pair();
  for (auto _ : state) {
    benchmark::DoNotOptimize(internal_bo_run(pair, split, 20, 1));
  }
}
BENCHMARK(InternalRun)->Unit(benchmark::kMillisecond);

static void Recommend16Pairs(benchmark::State& state) {
  Rng rng(7);
  ObservationSet data;
  for (int i = 0; i < 30; ++i) {
    Eigen::VectorXd x(4);
    for (int j = 0; j < 4; ++j) x[j] = rng.next_double();
    data.push_back({x, std::sin(4.0 * x[0]) + x[1]});
  }
  SelectorConfig cfg;
  const int workers = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(recommend(data, cfg, 1, workers));
  }
}
BENCHMARK(Recommend16Pairs)->Arg(1)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

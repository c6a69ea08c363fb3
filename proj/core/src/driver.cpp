#include "bopt/driver.hpp"

#include <chrono>
#include <limits>
#include <stdexcept>

#include "bopt/common.hpp"
#include "bopt/parallel.hpp"

namespace bopt {

namespace {

constexpr std::uint64_t kOuterFitStream = 0xF17000;
constexpr std::uint64_t kRecommendStream = 0x4EC000;
constexpr std::uint64_t kSubsampleStream = 0x5AB000;

struct RunState {
  const DiscreteTask& task;
  std::vector<char> observed;
  ObservationSet obs;
  double best = std::numeric_limits<double>::infinity();

  explicit RunState(const DiscreteTask& t) : task(t), observed(t.size(), 0) {}

  void add(std::size_t flat) {
    const double y = task.evaluate(flat);
    observed[flat] = 1;
    obs.push_back({task.point_normalized(flat), y});
    best = std::min(best, y);
  }
};

std::vector<std::size_t> unobserved_candidates(const RunState& state, std::size_t cap,
                                               std::uint64_t seed) {
  std::vector<std::size_t> out;
  out.reserve(state.observed.size() - state.obs.size());
  for (std::size_t i = 0; i < state.observed.size(); ++i) {
    if (!state.observed[i]) out.push_back(i);
  }
  if (cap > 0 && out.size() > cap) {
    Rng rng(seed);
    std::vector<std::size_t> picked;
    picked.reserve(cap);
    for (std::size_t p : rng.sample_without_replacement(out.size(), cap)) {
      picked.push_back(out[p]);
    }
    std::sort(picked.begin(), picked.end());
    out = std::move(picked);
  }
  return out;
}

// Acquisition argmax over the candidate list, streamed in fixed-size blocks.
// Blocks depend only on (candidates, block size), so any worker count scans
// identical blocks and the ordered reduction gives identical results.
std::size_t scan_candidates(const RunState& state, const TrainedSurrogate& surrogate,
                            const AcquisitionSpec& acq, double f_best,
                            const std::vector<std::size_t>& candidates,
                            const RunOptions& opts) {
  const std::size_t block = std::max<std::size_t>(1, opts.candidate_block);
  const std::size_t nblocks = (candidates.size() + block - 1) / block;
  const int d = state.task.dimension();

  std::vector<double> block_value(nblocks);
  std::vector<std::size_t> block_arg(nblocks);

  parallel_for(nblocks, opts.workers, [&](std::size_t b) {
    const std::size_t begin = b * block;
    const std::size_t count = std::min(block, candidates.size() - begin);
    Eigen::MatrixXd Q(count, d);
    std::vector<double> buf(d);
    for (std::size_t r = 0; r < count; ++r) {
      state.task.fill_point(candidates[begin + r], buf.data());
      for (int a = 0; a < d; ++a) Q(Eigen::Index(r), a) = buf[a];
    }
    Eigen::VectorXd mu, sigma2;
    predict_batch(surrogate, Q, mu, sigma2);
    std::size_t arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < count; ++r) {
      const double v =
          acquisition_value(acq, mu[Eigen::Index(r)], std::sqrt(sigma2[Eigen::Index(r)]), f_best);
      if (v > best) {
        best = v;
        arg = r;
      }
    }
    block_value[b] = best;
    block_arg[b] = candidates[begin + arg];
  });

  std::size_t winner = block_arg[0];
  double winner_value = block_value[0];
  for (std::size_t b = 1; b < nblocks; ++b) {
    if (block_value[b] > winner_value) {
      winner_value = block_value[b];
      winner = block_arg[b];
    }
  }
  return winner;
}

// One outer BO iteration; false when the candidate set is exhausted.
bool bo_step(RunState& state, const PairConfig& pair, std::uint64_t fit_seed,
             std::uint64_t subsample_seed, const RunOptions& opts) {
  const auto candidates = unobserved_candidates(state, opts.subsample_cap, subsample_seed);
  if (candidates.empty()) return false;

  const TrainedSurrogate surrogate =
      fit_surrogate(pair.kernel, observation_inputs(state.obs),
                    observation_targets(state.obs), fit_seed);
  const double f_best = best_objective(state.obs);
  const std::size_t flat =
      scan_candidates(state, surrogate, pair.acquisition, f_best, candidates, opts);
  state.add(flat);
  return true;
}

RegretTrace init_trace(const DiscreteTask& task, const std::string& method, bool adaptive,
                       std::size_t n_init, int iters, std::uint64_t seed,
                       const RunOptions& opts) {
  RegretTrace trace;
  trace.task = task.name();
  trace.method = method;
  trace.adaptive = adaptive;
  trace.trial_seed = seed;
  trace.n_init = int(n_init);
  trace.iterations = iters;
  trace.dimension = task.dimension();
  trace.optimum = task.optimum();
  trace.subsample_cap = opts.subsample_cap;
  return trace;
}

void evaluate_init(RunState& state, RegretTrace& trace,
                   const std::vector<Eigen::VectorXd>& init) {
  for (const auto& v : init) {
    const std::size_t flat = state.task.index_of(v);
    if (state.observed[flat]) {
      throw std::invalid_argument("initial design contains a duplicate point");
    }
    state.add(flat);
    trace.best_so_far.push_back(state.best);
  }
}

void pad_trace(RegretTrace& trace) {
  const std::size_t want = std::size_t(trace.n_init) + std::size_t(trace.iterations);
  while (trace.best_so_far.size() < want) {
    trace.best_so_far.push_back(trace.best_so_far.back());
  }
}

template <typename PickPair>
RegretTrace run_loop(const DiscreteTask& task, const std::string& method, bool adaptive,
                     const std::vector<Eigen::VectorXd>& init, int iters,
                     std::uint64_t seed, const RunOptions& opts, PickPair&& pick_pair) {
  if (iters < 0) throw std::invalid_argument("run: iters must be >= 0");
  if (init.empty()) throw std::invalid_argument("run: empty initial design");
  if (iters > 0 && init.size() < 2) {
    throw std::invalid_argument("run: need at least 2 initial points to fit");
  }

  RunState state(task);
  RegretTrace trace = init_trace(task, method, adaptive, init.size(), iters, seed, opts);
  evaluate_init(state, trace, init);

  for (int t = 0; t < iters; ++t) {
    const auto started = std::chrono::steady_clock::now();
    const PairConfig pair = pick_pair(state.obs, t);
    const bool stepped = bo_step(state, pair, derive_seed(seed, kOuterFitStream + t),
                                 derive_seed(seed, kSubsampleStream + t), opts);
    if (!stepped) break;  // candidates exhausted; trace gets padded below
    trace.selected_pairs.push_back(pair);
    trace.best_so_far.push_back(state.best);
    trace.wall_times.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
  }
  pad_trace(trace);
  return trace;
}

}  // namespace

RegretTrace run_fixed(const DiscreteTask& task, const PairConfig& pair,
                      const std::vector<Eigen::VectorXd>& init, int iters,
                      std::uint64_t seed, const RunOptions& opts) {
  return run_loop(task, pair.name(), false, init, iters, seed, opts,
                  [&](const ObservationSet&, int) { return pair; });
}

RegretTrace run_boost(const DiscreteTask& task, const SelectorConfig& cfg,
                      const std::vector<Eigen::VectorXd>& init, int iters,
                      std::uint64_t seed, const RunOptions& opts) {
  return run_loop(task, "boost", true, init, iters, seed, opts,
                  [&](const ObservationSet& obs, int t) {
                    if (obs.size() < 4) return default_pair();
                    return recommend(obs, cfg, derive_seed(seed, kRecommendStream + t),
                                     opts.workers);
                  });
}

std::vector<double> simple_regret(const RegretTrace& trace, double optimum) {
  std::vector<double> regret(trace.best_so_far.size());
  for (std::size_t i = 0; i < regret.size(); ++i) {
    regret[i] = trace.best_so_far[i] - optimum;
  }
  return regret;
}

}  // namespace bopt

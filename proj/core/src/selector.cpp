#include "bopt/selector.hpp"

#include <stdexcept>

#include "bopt/common.hpp"
#include "bopt/parallel.hpp"

namespace bopt {

namespace {

constexpr std::uint64_t kInternalRunStream = 0x1b0;
constexpr std::uint64_t kPartitionStream = 0x9a7;
constexpr std::uint64_t kTieStream = 0x71e;

int acq_priority_of(AcquisitionFamily f) {
  switch (f) {
    case AcquisitionFamily::EI: return 0;
    case AcquisitionFamily::PI: return 1;
    case AcquisitionFamily::LCB: return 2;
    case AcquisitionFamily::PM: return 3;
  }
  return 3;
}

int kernel_priority_of(KernelFamily f) {
  switch (f) {
    case KernelFamily::Matern32: return 0;
    case KernelFamily::Matern52: return 1;
    case KernelFamily::RBF: return 2;
    case KernelFamily::RQ: return 3;
  }
  return 3;
}

}  // namespace

std::string PairConfig::name() const {
  return std::string(kernel_name(kernel.family)) + "_" + acquisition_name(acquisition.family);
}

PairConfig make_pair(KernelFamily kernel, AcquisitionFamily acquisition) {
  PairConfig pair;
  pair.kernel.family = kernel;
  pair.acquisition.family = acquisition;
  pair.acq_priority = acq_priority_of(acquisition);
  pair.kernel_priority = kernel_priority_of(kernel);
  return pair;
}

PairConfig pair_from_name(const std::string& name) {
  const auto sep = name.rfind('_');
  if (sep == std::string::npos) {
    throw std::invalid_argument("pair_from_name: expected <kernel>_<acquisition>: " + name);
  }
  return make_pair(kernel_from_name(name.substr(0, sep)),
                   acquisition_from_name(name.substr(sep + 1)));
}

std::vector<PairConfig> all_pairs() {
  static const AcquisitionFamily acqs[] = {AcquisitionFamily::EI, AcquisitionFamily::PI,
                                           AcquisitionFamily::LCB, AcquisitionFamily::PM};
  static const KernelFamily kernels[] = {KernelFamily::Matern32, KernelFamily::Matern52,
                                         KernelFamily::RBF, KernelFamily::RQ};
  std::vector<PairConfig> pairs;
  pairs.reserve(16);
  for (auto a : acqs) {
    for (auto k : kernels) pairs.push_back(make_pair(k, a));
  }
  return pairs;
}

PairConfig default_pair() {
  return make_pair(KernelFamily::Matern32, AcquisitionFamily::EI);
}

std::uint64_t internal_run_seed(std::uint64_t recommend_seed, std::size_t pair_index) {
  return derive_seed(recommend_seed, kInternalRunStream + pair_index);
}

PartitionConfig partition_config_for(const SelectorConfig& cfg, std::uint64_t seed) {
  PartitionConfig pcfg = cfg.partition;
  pcfg.random_seed = derive_seed(seed, kPartitionStream);
  return pcfg;
}

PairScore internal_bo_run(const PairConfig& pair, const PartitionSplit& split,
                          int t_max, std::uint64_t seed) {
  if (split.query.empty()) {
    throw std::invalid_argument("internal_bo_run: empty query set");
  }
  if (t_max < 1) {
    throw std::invalid_argument("internal_bo_run: t_max must be >= 1");
  }

  ObservationSet reference = split.reference;
  ObservationSet query = split.query;

  int t = 0;
  while (t < t_max && !query.empty()) {
    const TrainedSurrogate surrogate =
        fit_surrogate(pair.kernel, observation_inputs(reference),
                      observation_targets(reference), derive_seed(seed, t));
    const double f_best = best_objective(reference);
    const std::size_t j =
        select_next(pair.acquisition, surrogate, observation_inputs(query), f_best);

    const Observation chosen = query[j];
    query.erase(query.begin() + std::ptrdiff_t(j));
    reference.push_back(chosen);
    ++t;

    if (chosen.y <= split.y_target) {
      return {pair, t, true};
    }
  }
  // Budget spent or query exhausted without a hit: scored as a full failure
  // so pair scores stay comparable.
  return {pair, t_max, false};
}

std::size_t pick_best(const std::vector<PairScore>& scores, TieBreak tie_break,
                      std::uint64_t seed) {
  if (scores.empty()) {
    throw std::invalid_argument("pick_best: no scores");
  }
  int best_iters = scores[0].iterations;
  for (const auto& s : scores) best_iters = std::min(best_iters, s.iterations);

  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].iterations == best_iters) tied.push_back(i);
  }
  if (tied.size() == 1) return tied[0];

  if (tie_break == TieBreak::Random) {
    Rng rng(derive_seed(seed, kTieStream));
    return tied[rng.next_index(tied.size())];
  }
  // Acquisition-major lexicographic priority.
  std::size_t best = tied[0];
  for (std::size_t i : tied) {
    const auto& a = scores[i].pair;
    const auto& b = scores[best].pair;
    if (a.acq_priority < b.acq_priority ||
        (a.acq_priority == b.acq_priority && a.kernel_priority < b.kernel_priority)) {
      best = i;
    }
  }
  return best;
}

PairConfig recommend(const ObservationSet& data, const SelectorConfig& cfg,
                     std::uint64_t seed, int workers) {
  if (cfg.pairs.empty()) {
    throw std::invalid_argument("recommend: no candidate pairs");
  }
  const PartitionSplit split = make_partition(data, partition_config_for(cfg, seed));

  std::vector<PairScore> scores(cfg.pairs.size());
  parallel_for(cfg.pairs.size(), workers, [&](std::size_t i) {
    scores[i] = internal_bo_run(cfg.pairs[i], split, cfg.t_max, internal_run_seed(seed, i));
  });
  return cfg.pairs[pick_best(scores, cfg.tie_break, seed)];
}

}  // namespace bopt

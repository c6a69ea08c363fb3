#include "bopt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "bopt/parallel.hpp"

namespace fs = std::filesystem;

namespace bopt {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

PartitionStrategy strategy_from_name(const std::string& name) {
  if (name == "kmeans") return PartitionStrategy::KMeans;
  if (name == "random") return PartitionStrategy::Random;
  throw std::invalid_argument("unknown partition strategy: " + name);
}

TieBreak tiebreak_from_name(const std::string& name) {
  if (name == "priority") return TieBreak::Priority;
  if (name == "random") return TieBreak::Random;
  throw std::invalid_argument("unknown tie-break: " + name);
}

}  // namespace

MethodSpec parse_method(const std::string& name) {
  MethodSpec spec;
  spec.label = name;
  if (name == "boost") {
    spec.adaptive = true;
    return spec;
  }
  spec.pair = pair_from_name(name);
  return spec;
}

std::vector<MethodSpec> parse_methods(const std::vector<std::string>& names) {
  std::vector<MethodSpec> out;
  auto add_pairs = [&out] {
    for (const auto& p : all_pairs()) {
      MethodSpec spec;
      spec.label = p.name();
      spec.pair = p;
      out.push_back(spec);
    }
  };
  for (const auto& name : names) {
    if (name == "all") {
      out.push_back(parse_method("boost"));
      add_pairs();
    } else if (name == "pairs") {
      add_pairs();
    } else {
      out.push_back(parse_method(name));
    }
  }
  if (out.empty()) throw std::invalid_argument("no methods configured");
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      if (out[i].label == out[j].label) {
        throw std::invalid_argument("duplicate method: " + out[i].label);
      }
    }
  }
  return out;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("config: parse error in " + path + ": " + e.what());
  }

  ExperimentConfig cfg;
  if (j.contains("tasks")) cfg.tasks = j["tasks"].get<std::vector<std::string>>();
  if (j.contains("tables")) cfg.tables = j["tables"].get<std::vector<std::string>>();
  if (j.contains("methods")) cfg.methods = j["methods"].get<std::vector<std::string>>();
  if (j.contains("n_init")) cfg.n_init = j["n_init"].get<int>();
  if (j.contains("iterations")) cfg.iterations = j["iterations"].get<int>();
  if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("subsample_cap")) cfg.subsample_cap = j["subsample_cap"].get<std::size_t>();
  if (j.contains("selector")) {
    const auto& s = j["selector"];
    if (s.contains("t_max")) cfg.t_max = s["t_max"].get<int>();
    if (s.contains("percentile")) cfg.percentile = s["percentile"].get<double>();
    if (s.contains("ratio_divisor")) cfg.ratio_divisor = s["ratio_divisor"].get<int>();
    if (s.contains("strategy")) cfg.strategy = strategy_from_name(s["strategy"].get<std::string>());
    if (s.contains("tie_break")) cfg.tie_break = tiebreak_from_name(s["tie_break"].get<std::string>());
    if (s.contains("target_mode")) cfg.target_mode = s["target_mode"].get<std::string>();
  }
  return cfg;
}

namespace {

struct Job {
  std::shared_ptr<const DiscreteTask> task;
  const SyntheticTask* synthetic = nullptr;  // null for tabular tasks
  const TabularTask* tabular = nullptr;
  MethodSpec method;
  std::uint64_t seed = 0;
};

SelectorConfig selector_config_for(const ExperimentConfig& cfg, const DiscreteTask& task) {
  SelectorConfig sel;
  sel.t_max = cfg.t_max;
  sel.tie_break = cfg.tie_break;
  sel.partition.ratio_divisor = cfg.ratio_divisor;
  sel.partition.percentile = cfg.percentile;
  sel.partition.strategy = cfg.strategy;
  if (cfg.target_mode == "optimum") {
    sel.partition.target_override = task.optimum();
  } else if (cfg.target_mode != "percentile") {
    throw std::invalid_argument("unknown target mode: " + cfg.target_mode);
  }
  return sel;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (cfg.iterations < 0) throw std::invalid_argument("experiment: iterations must be >= 0");
  if (cfg.n_init < 2) throw std::invalid_argument("experiment: n_init must be >= 2");
  if (cfg.target_mode != "percentile" && cfg.target_mode != "optimum") {
    throw std::invalid_argument("unknown target mode: " + cfg.target_mode);
  }

  const std::vector<MethodSpec> methods = parse_methods(cfg.methods);

  // Resolve every task up front so configuration errors surface before any run.
  std::vector<std::shared_ptr<const DiscreteTask>> tasks;
  std::vector<const SyntheticTask*> synthetic_of;
  std::vector<const TabularTask*> tabular_of;
  if (!cfg.tasks.empty()) {
    const auto grids = build_standard_grids();
    for (const auto& name : cfg.tasks) {
      const auto it = grids.find(name);
      if (it == grids.end()) throw std::invalid_argument("unknown task: " + name);
      tasks.push_back(it->second);
      synthetic_of.push_back(it->second.get());
      tabular_of.push_back(nullptr);
    }
  }
  for (const auto& path : cfg.tables) {
    auto table = std::make_shared<TabularTask>(load_tabular_file(path));
    if (int(table->size()) < cfg.n_init) {
      throw std::invalid_argument("table too small for the initial design: " + path);
    }
    tabular_of.push_back(table.get());
    synthetic_of.push_back(nullptr);
    tasks.push_back(std::move(table));
  }
  if (tasks.empty()) throw std::invalid_argument("experiment: no tasks configured");

  const fs::path out_dir(cfg.out_dir);
  const fs::path trace_dir = out_dir / "traces";
  fs::create_directories(trace_dir);

  std::vector<Job> jobs;
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    for (const auto& method : methods) {
      for (int trial = 1; trial <= cfg.trials; ++trial) {
        jobs.push_back(Job{tasks[ti], synthetic_of[ti], tabular_of[ti], method,
                           std::uint64_t(trial - 1)});
      }
    }
  }

  const int pool = cfg.workers > 0 ? cfg.workers
                                   : std::max(1u, std::thread::hardware_concurrency());
  RunOptions run_opts;
  run_opts.subsample_cap = cfg.subsample_cap;
  // A single job gets the whole pool for its internal evaluations; otherwise
  // the job-level pool is the parallelism.
  run_opts.workers = jobs.size() == 1 ? pool : 1;

  ExperimentResult result;
  result.traces.resize(jobs.size());

  parallel_for(jobs.size(), pool, [&](std::size_t i) {
    const Job& job = jobs[i];
    const std::vector<Eigen::VectorXd> init =
        job.synthetic ? lhs_initial_design(job.synthetic->space(), cfg.n_init, job.seed)
                      : random_initial_design(*job.tabular, cfg.n_init, job.seed);
    RegretTrace trace;
    if (job.method.adaptive) {
      trace = run_boost(*job.task, selector_config_for(cfg, *job.task), init,
                        cfg.iterations, job.seed, run_opts);
    } else {
      trace = run_fixed(*job.task, job.method.pair, init, cfg.iterations, job.seed, run_opts);
    }
    trace.method = job.method.label;
    write_trace_file((trace_dir / trace_filename(trace)).string(), trace);
    result.traces[i] = std::move(trace);
  });

  for (const auto& trace : result.traces) {
    RuntimeRecord rec;
    rec.task = trace.task;
    rec.method = trace.method;
    rec.trial_seed = trace.trial_seed;
    rec.iterations = int(trace.wall_times.size());
    for (double w : trace.wall_times) rec.total_seconds += w;
    result.runtimes.push_back(rec);
  }
  write_runtimes_csv((trace_dir / "runtimes.csv").string(), result.runtimes);
  return result;
}

namespace {

struct MethodSeries {
  // mean regret over trials for every evaluation index up to the rank index
  std::vector<double> prefix_mean;
};

// Lexicographic comparison from the rank index backwards.
int compare_series(const MethodSeries& a, const MethodSeries& b) {
  for (std::size_t i = a.prefix_mean.size(); i-- > 0;) {
    if (a.prefix_mean[i] < b.prefix_mean[i]) return -1;
    if (a.prefix_mean[i] > b.prefix_mean[i]) return 1;
  }
  return 0;
}

}  // namespace

RankTable rank_methods(const std::vector<RegretTrace>& traces,
                       std::size_t evaluation_index) {
  if (traces.empty()) throw std::invalid_argument("rank_methods: no traces");
  const std::size_t length = traces.front().best_so_far.size();
  for (const auto& t : traces) {
    if (t.best_so_far.size() != length) {
      throw std::invalid_argument("rank_methods: traces have mismatched lengths");
    }
  }
  if (evaluation_index >= length) {
    throw std::invalid_argument("rank_methods: evaluation index out of range");
  }

  RankTable table;
  table.evaluation_index = evaluation_index;
  std::map<std::string, std::size_t> task_of, method_of;
  for (const auto& t : traces) {
    if (!task_of.count(t.task)) {
      task_of[t.task] = table.tasks.size();
      table.tasks.push_back(t.task);
    }
    if (!method_of.count(t.method)) {
      method_of[t.method] = table.methods.size();
      table.methods.push_back(t.method);
    }
  }
  const std::size_t n_tasks = table.tasks.size();
  const std::size_t n_methods = table.methods.size();

  std::vector<std::vector<std::vector<const RegretTrace*>>> grouped(
      n_tasks, std::vector<std::vector<const RegretTrace*>>(n_methods));
  for (const auto& t : traces) {
    grouped[task_of[t.task]][method_of[t.method]].push_back(&t);
  }

  table.mean_regret.assign(n_tasks, std::vector<double>(n_methods, 0.0));
  table.ranks.assign(n_tasks, std::vector<int>(n_methods, 0));
  table.average_rank.assign(n_methods, 0.0);

  for (std::size_t ti = 0; ti < n_tasks; ++ti) {
    std::vector<MethodSeries> series(n_methods);
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      const auto& group = grouped[ti][mi];
      if (group.empty()) {
        throw std::invalid_argument("rank_methods: method '" + table.methods[mi] +
                                    "' has no traces for task '" + table.tasks[ti] + "'");
      }
      series[mi].prefix_mean.resize(evaluation_index + 1);
      for (std::size_t i = 0; i <= evaluation_index; ++i) {
        double sum = 0.0;
        for (const RegretTrace* t : group) sum += t->best_so_far[i] - t->optimum;
        series[mi].prefix_mean[i] = sum / double(group.size());
      }
      table.mean_regret[ti][mi] = series[mi].prefix_mean[evaluation_index];
    }

    std::vector<std::size_t> order(n_methods);
    for (std::size_t i = 0; i < n_methods; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return compare_series(series[a], series[b]) < 0;
    });
    // competition ranking; full-prefix ties share the minimum rank
    for (std::size_t pos = 0; pos < n_methods; ++pos) {
      if (pos > 0 && compare_series(series[order[pos]], series[order[pos - 1]]) == 0) {
        table.ranks[ti][order[pos]] = table.ranks[ti][order[pos - 1]];
      } else {
        table.ranks[ti][order[pos]] = int(pos) + 1;
      }
    }
  }

  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    double sum = 0.0;
    for (std::size_t ti = 0; ti < n_tasks; ++ti) sum += table.ranks[ti][mi];
    table.average_rank[mi] = sum / double(n_tasks);
  }
  return table;
}

void emit_report(const RankTable& table, const std::vector<RegretTrace>& traces,
                 const std::string& out_dir, const std::vector<RuntimeRecord>& runtimes) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  {
    std::ofstream out(dir / "rank_table.csv");
    if (!out) throw std::runtime_error("report: cannot write rank_table.csv");
    out << "method";
    for (const auto& task : table.tasks) out << ',' << task;
    out << ",avg_rank\n";
    std::vector<std::size_t> order(table.methods.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return table.average_rank[a] < table.average_rank[b];
    });
    for (std::size_t mi : order) {
      out << table.methods[mi];
      for (std::size_t ti = 0; ti < table.tasks.size(); ++ti) {
        out << ',' << table.ranks[ti][mi];
      }
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.4f", table.average_rank[mi]);
      out << ',' << buf << '\n';
    }
  }

  // per-(task, method) regret curves: mean and sample std over trials
  {
    std::map<std::pair<std::string, std::string>, std::vector<const RegretTrace*>> curves;
    for (const auto& t : traces) curves[{t.task, t.method}].push_back(&t);
    for (const auto& [key, group] : curves) {
      const std::size_t length = group.front()->best_so_far.size();
      std::ofstream out(dir / ("regret_curve__" + key.first + "__" + key.second + ".csv"));
      if (!out) throw std::runtime_error("report: cannot write regret curve");
      out << "eval_index,mean_regret,std_regret\n";
      for (std::size_t i = 0; i < length; ++i) {
        double mean = 0.0;
        for (const RegretTrace* t : group) mean += t->best_so_far[i] - t->optimum;
        mean /= double(group.size());
        double var = 0.0;
        for (const RegretTrace* t : group) {
          const double d = t->best_so_far[i] - t->optimum - mean;
          var += d * d;
        }
        const double sd = group.size() > 1 ? std::sqrt(var / double(group.size() - 1)) : 0.0;
        out << i << ',' << fmt_double(mean) << ',' << fmt_double(sd) << '\n';
      }
    }
  }

  // selected-pair log for adaptive runs
  {
    std::ofstream out(dir / "selected_pairs.csv");
    if (!out) throw std::runtime_error("report: cannot write selected_pairs.csv");
    out << "task,method,trial_seed,iteration,kernel,acquisition\n";
    for (const auto& t : traces) {
      if (!t.adaptive) continue;
      for (std::size_t i = 0; i < t.selected_pairs.size(); ++i) {
        out << t.task << ',' << t.method << ',' << t.trial_seed << ',' << i << ','
            << kernel_name(t.selected_pairs[i].kernel.family) << ','
            << acquisition_name(t.selected_pairs[i].acquisition.family) << '\n';
      }
    }
  }

  if (!runtimes.empty()) {
    std::map<std::string, std::pair<double, long>> per_method;  // total seconds, iterations
    std::map<std::string, int> runs;
    for (const auto& r : runtimes) {
      per_method[r.method].first += r.total_seconds;
      per_method[r.method].second += r.iterations;
      runs[r.method] += 1;
    }
    std::ofstream out(dir / "runtime_summary.csv");
    if (!out) throw std::runtime_error("report: cannot write runtime_summary.csv");
    out << "method,runs,mean_total_seconds,mean_seconds_per_iteration\n";
    for (const auto& [method, acc] : per_method) {
      char total[32], per_iter[32];
      std::snprintf(total, sizeof(total), "%.6f", acc.first / double(runs[method]));
      std::snprintf(per_iter, sizeof(per_iter), "%.6f",
                    acc.second > 0 ? acc.first / double(acc.second) : 0.0);
      out << method << ',' << runs[method] << ',' << total << ',' << per_iter << '\n';
    }
  }
}

std::vector<RegretTrace> read_trace_dir(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".trace") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<RegretTrace> traces;
  traces.reserve(files.size());
  for (const auto& f : files) traces.push_back(read_trace_file(f.string()));
  if (traces.empty()) {
    throw std::runtime_error("no .trace files found in " + dir);
  }
  return traces;
}

void write_runtimes_csv(const std::string& path, std::vector<RuntimeRecord> records) {
  std::sort(records.begin(), records.end(), [](const RuntimeRecord& a, const RuntimeRecord& b) {
    return std::tie(a.task, a.method, a.trial_seed) < std::tie(b.task, b.method, b.trial_seed);
  });
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "task,method,trial_seed,total_seconds,iterations\n";
  for (const auto& r : records) {
    char secs[32];
    std::snprintf(secs, sizeof(secs), "%.6f", r.total_seconds);
    out << r.task << ',' << r.method << ',' << r.trial_seed << ',' << secs << ','
        << r.iterations << '\n';
  }
}

std::vector<RuntimeRecord> read_runtimes_csv(const std::string& path) {
  std::vector<RuntimeRecord> records;
  std::ifstream in(path);
  if (!in) return records;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    RuntimeRecord r;
    std::getline(ss, r.task, ',');
    std::getline(ss, r.method, ',');
    std::getline(ss, field, ',');
    r.trial_seed = std::stoull(field);
    std::getline(ss, field, ',');
    r.total_seconds = std::stod(field);
    std::getline(ss, field, ',');
    r.iterations = std::stoi(field);
    records.push_back(std::move(r));
  }
  return records;
}

std::string format_rank_table(const RankTable& table) {
  std::ostringstream out;
  out << "rank table (evaluation index " << table.evaluation_index << ")\n";
  std::vector<std::size_t> order(table.methods.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return table.average_rank[a] < table.average_rank[b];
  });
  out << "method";
  for (const auto& task : table.tasks) out << '\t' << task;
  out << "\tavg\n";
  for (std::size_t mi : order) {
    out << table.methods[mi];
    for (std::size_t ti = 0; ti < table.tasks.size(); ++ti) {
      out << '\t' << table.ranks[ti][mi];
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", table.average_rank[mi]);
    out << '\t' << buf << '\n';
  }
  return out.str();
}

}  // namespace bopt

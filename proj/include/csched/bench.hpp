#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "csched/greedy.hpp"
#include "csched/hybrid.hpp"
#include "csched/io.hpp"
#include "csched/lp.hpp"
#include "csched/oracle.hpp"
#include "csched/rng.hpp"

namespace csched {

inline constexpr int kBenchSchemaVersion = 1;

struct BenchJob {
  std::string generator = "random";  // random | exhaustive | adversarial
  int senders = 2;
  int receivers = 2;
  int count = 10;                 // instances drawn (random, adversarial)
  std::int64_t max_demand = 3;    // entry ceiling (random, exhaustive, adversarial)
  int density_percent = 60;       // chance an entry is nonzero (random)
  Rat delta{1};
  Rat window{5};
  std::vector<std::string> algorithms{"greedy"};
  int k = 2;        // lp slot budget
  Rat epsilon{1, 5};
};

struct BenchConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<BenchJob> jobs;
};

inline BenchConfig bench_config_from_json(const Json& j) {
  BenchConfig config;
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) config.threads = j.at("threads").get<int>();
  if (!j.contains("jobs") || !j.at("jobs").is_array()) throw ParseError("missing field 'jobs'");
  int index = 0;
  for (const Json& job_json : j.at("jobs")) {
    const std::string where = "jobs[" + std::to_string(index++) + "]";
    BenchJob job;
    if (job_json.contains("generator")) job.generator = job_json.at("generator").get<std::string>();
    if (job.generator != "random" && job.generator != "exhaustive" &&
        job.generator != "adversarial") {
      throw ParseError(where + ": unknown generator '" + job.generator + "'");
    }
    if (job_json.contains("senders")) job.senders = job_json.at("senders").get<int>();
    if (job_json.contains("receivers")) job.receivers = job_json.at("receivers").get<int>();
    if (job.senders < 1 || job.receivers < 1) throw ParseError(where + ": dimensions must be positive");
    if (job_json.contains("count")) job.count = job_json.at("count").get<int>();
    if (job_json.contains("max_demand")) job.max_demand = job_json.at("max_demand").get<std::int64_t>();
    if (job.max_demand < 0) throw ParseError(where + ": max_demand must be nonnegative");
    if (job_json.contains("density_percent")) {
      job.density_percent = job_json.at("density_percent").get<int>();
    }
    if (job_json.contains("delta")) {
      job.delta = detail::nonnegative_rat_from_json(job_json.at("delta"), where + ".delta");
    }
    if (job_json.contains("window")) {
      job.window = detail::nonnegative_rat_from_json(job_json.at("window"), where + ".window");
    }
    if (job_json.contains("k")) job.k = job_json.at("k").get<int>();
    if (job_json.contains("epsilon")) {
      job.epsilon = detail::nonnegative_rat_from_json(job_json.at("epsilon"), where + ".epsilon");
    }
    if (job_json.contains("algorithms")) {
      job.algorithms.clear();
      for (const Json& a : job_json.at("algorithms")) job.algorithms.push_back(a.get<std::string>());
    }
    for (const std::string& algo : job.algorithms) {
      if (algo != "greedy" && algo != "lp" && algo != "hybrid" && algo != "oracle") {
        throw ParseError(where + ": unknown algorithm '" + algo + "'");
      }
    }
    config.jobs.push_back(std::move(job));
  }
  return config;
}

struct BenchReport {
  std::string csv;
  std::string summary_json;
};

namespace detail {

struct BenchTask {
  Instance<Rat> instance;
  std::vector<std::string> algorithms;
  int k;
  Rat epsilon;
  std::uint64_t seed;
};

struct BenchCell {
  std::string algorithm;
  Rat f;
  std::optional<Rat> oracle_f;
  std::optional<Rat> ratio;
  double wall_ms = 0.0;
};

inline std::string instance_hash(const Instance<Rat>& inst) {
  std::string canon = std::to_string(inst.demand.senders()) + ";" +
                      std::to_string(inst.demand.receivers()) + ";";
  for (const Rat& v : inst.demand.cells()) canon += rat_to_string(v) + ",";
  canon += ";" + rat_to_string(inst.delta) + ";" + rat_to_string(inst.window);
  const std::uint64_t h = csched::detail::fnv1a(canon);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline std::int64_t checked_exhaustive_count(const BenchJob& job) {
  std::int64_t total = 1;
  for (int i = 0; i < job.senders * job.receivers; ++i) {
    total *= job.max_demand + 1;
    if (total > 1'000'000) throw BudgetError("exhaustive bench job enumerates too many instances");
  }
  return total;
}

inline std::vector<BenchTask> expand_jobs(const BenchConfig& config) {
  std::vector<BenchTask> tasks;
  RngStream root(config.seed, "bench-gen");
  for (std::size_t jix = 0; jix < config.jobs.size(); ++jix) {
    const BenchJob& job = config.jobs[jix];
    RngStream jstream = root.child(jix);
    const int cells = job.senders * job.receivers;
    auto push = [&](DemandMatrix<Rat> demand, std::uint64_t instance_seed) {
      tasks.push_back(BenchTask{Instance<Rat>(std::move(demand), job.delta, job.window),
                                job.algorithms, job.k, job.epsilon, instance_seed});
    };
    if (job.generator == "exhaustive") {
      const std::int64_t total = checked_exhaustive_count(job);
      for (std::int64_t code = 0; code < total; ++code) {
        std::vector<Rat> values(static_cast<std::size_t>(cells));
        std::int64_t rest = code;
        for (int c = 0; c < cells; ++c) {
          values[static_cast<std::size_t>(c)] = Rat(rest % (job.max_demand + 1));
          rest /= job.max_demand + 1;
        }
        push(DemandMatrix<Rat>(job.senders, job.receivers, std::move(values)),
             static_cast<std::uint64_t>(code));
      }
    } else if (job.generator == "random") {
      for (int i = 0; i < job.count; ++i) {
        RngStream istream = jstream.child(static_cast<std::uint64_t>(i));
        std::vector<Rat> values(static_cast<std::size_t>(cells));
        for (int c = 0; c < cells; ++c) {
          if (istream.next_in(1, 100) <= job.density_percent) {
            values[static_cast<std::size_t>(c)] = Rat(istream.next_in(1, job.max_demand));
          }
        }
        push(DemandMatrix<Rat>(job.senders, job.receivers, std::move(values)),
             static_cast<std::uint64_t>(i));
      }
    } else {  // adversarial: a heavy matching competing with a carpet of units
      for (int i = 0; i < job.count; ++i) {
        RngStream istream = jstream.child(static_cast<std::uint64_t>(i));
        std::vector<int> perm(static_cast<std::size_t>(job.receivers));
        for (int r = 0; r < job.receivers; ++r) perm[static_cast<std::size_t>(r)] = r;
        for (int r = job.receivers - 1; r > 0; --r) {
          std::swap(perm[static_cast<std::size_t>(r)],
                    perm[static_cast<std::size_t>(istream.next_in(0, r))]);
        }
        DemandMatrix<Rat> demand(job.senders, job.receivers);
        for (int s = 0; s < job.senders; ++s) {
          for (int r = 0; r < job.receivers; ++r) {
            demand(s, r) = (s < job.receivers && perm[static_cast<std::size_t>(s)] == r)
                               ? Rat(job.max_demand)
                               : Rat(1);
          }
        }
        push(std::move(demand), static_cast<std::uint64_t>(i));
      }
    }
  }
  return tasks;
}

inline bool within_oracle_budget(const Instance<Rat>& inst) {
  if (inst.demand.senders() * inst.demand.receivers() > kOracleMaxCells) return false;
  if (!is_integral(inst.delta) || !is_integral(inst.window)) return false;
  if (inst.window > Rat(kOracleMaxWindow)) return false;
  for (const Rat& v : inst.demand.cells()) {
    if (!is_integral(v)) return false;
  }
  return true;
}

}  // namespace detail

// Runs every job instance under every requested algorithm. Reports are
// byte-identical for a fixed seed regardless of the worker count: work is
// scattered over threads but rows are merged in instance order. Wall times
// are filled only on request since they would break that reproducibility.
inline BenchReport run_benchmark(const BenchConfig& config, bool with_timings = false) {
  std::vector<detail::BenchTask> tasks = detail::expand_jobs(config);
  std::vector<std::vector<detail::BenchCell>> cells(tasks.size());

  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t index = cursor.fetch_add(1);
      if (index >= tasks.size()) return;
      const detail::BenchTask& task = tasks[index];
      std::optional<Rat> oracle_value;
      if (detail::within_oracle_budget(task.instance)) {
        oracle_value = optimal_schedule_integer(task.instance).value;
      }
      for (const std::string& algo : task.algorithms) {
        const auto start = std::chrono::steady_clock::now();
        Rat f;
        if (algo == "greedy") {
          f = evaluate_throughput(greedy_schedule(task.instance), task.instance.demand);
        } else if (algo == "lp") {
          f = evaluate_throughput(lp_schedule(task.instance, task.k, task.epsilon, task.seed),
                                  task.instance.demand);
        } else if (algo == "hybrid") {
          f = evaluate_throughput(hybrid_schedule(task.instance, task.epsilon, task.seed),
                                  task.instance.demand);
        } else {
          if (!oracle_value) continue;  // oracle requested beyond its budget: no row
          f = *oracle_value;
        }
        detail::BenchCell cell;
        cell.algorithm = algo;
        cell.f = f;
        cell.oracle_f = oracle_value;
        if (oracle_value && *oracle_value > 0) cell.ratio = f / *oracle_value;
        cell.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        cells[index].push_back(std::move(cell));
      }
    }
  };

  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::ostringstream csv;
  csv << "instance,algorithm,f,oracle_f,ratio,wall_ms\n";
  struct Aggregate {
    std::int64_t instances = 0;
    std::int64_t covered = 0;
    std::optional<Rat> min_ratio;
    Rat ratio_sum{0};
  };
  std::map<std::string, Aggregate> by_algo;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string hash = detail::instance_hash(tasks[i].instance);
    for (const detail::BenchCell& cell : cells[i]) {
      csv << hash << ',' << cell.algorithm << ',' << rat_to_string(cell.f) << ',';
      if (cell.oracle_f) csv << rat_to_string(*cell.oracle_f);
      csv << ',';
      if (cell.ratio) csv << rat_to_string(*cell.ratio);
      csv << ',';
      if (with_timings) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", cell.wall_ms);
        csv << buf;
      }
      csv << '\n';
      Aggregate& agg = by_algo[cell.algorithm];
      ++agg.instances;
      if (cell.ratio) {
        ++agg.covered;
        agg.ratio_sum += *cell.ratio;
        if (!agg.min_ratio || *cell.ratio < *agg.min_ratio) agg.min_ratio = cell.ratio;
      }
    }
  }

  Json summary;
  summary["schema_version"] = kBenchSchemaVersion;
  summary["seed"] = config.seed;
  summary["instances"] = tasks.size();
  Json algos = Json::object();
  for (const auto& [name, agg] : by_algo) {
    Json entry;
    entry["rows"] = agg.instances;
    entry["oracle_covered"] = agg.covered;
    if (agg.min_ratio) {
      entry["min_ratio"] = rat_to_string(*agg.min_ratio);
      entry["mean_ratio"] = rat_to_string(agg.ratio_sum / agg.covered);
    }
    algos[name] = std::move(entry);
  }
  summary["algorithms"] = std::move(algos);

  return BenchReport{csv.str(), summary.dump(2) + "\n"};
}

}  // namespace csched

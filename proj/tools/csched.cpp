// Command-line front end: solve instances, simulate online traces, run
// benchmark suites, and generate inputs. All randomness flows from --seed
// through named streams, so every run is reproducible.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "csched/bench.hpp"
#include "csched/greedy.hpp"
#include "csched/hybrid.hpp"
#include "csched/io.hpp"
#include "csched/lp.hpp"
#include "csched/online.hpp"
#include "csched/oracle.hpp"

namespace {

using namespace csched;

Rat parse_rat_arg(const std::string& text, const std::string& flag) {
  std::optional<Rat> v = parse_rat(text);
  if (!v) throw ParseError(flag + ": malformed rational '" + text + "'");
  return *v;
}

struct SolveArgs {
  std::string input;
  std::string algo = "greedy";
  std::string epsilon = "1/5";
  int k = 2;
  std::uint64_t seed = 0;
  std::string output;
  bool verbose = false;
};

int run_solve(const SolveArgs& args) {
  Instance<Rat> inst = parse_instance(args.input);
  const Rat epsilon = parse_rat_arg(args.epsilon, "--epsilon");
  std::ostream* diag = args.verbose ? &std::cerr : nullptr;

  Schedule<Rat> sched;
  if (args.algo == "greedy") {
    sched = greedy_schedule(inst);
  } else if (args.algo == "lp") {
    sched = lp_schedule(inst, args.k, epsilon, args.seed, diag);
  } else if (args.algo == "hybrid") {
    sched = hybrid_schedule(inst, epsilon, args.seed, diag);
  } else {
    sched = optimal_schedule_integer(inst).schedule;
  }

  const Rat f = evaluate_throughput(sched, inst.demand);
  std::cout << "algorithm: " << args.algo << "\n"
            << "configurations: " << sched.configs.size() << "\n"
            << "time_used: " << rat_to_string(sched.time_used()) << " of "
            << rat_to_string(inst.window) << "\n"
            << "throughput: " << rat_to_string(f) << " (" << to_double(f) << ")\n"
            << "demand_total: " << rat_to_string(inst.demand.total()) << "\n";
  if (args.verbose) {
    for (const auto& config : sched.configs) {
      std::cout << "  alpha=" << rat_to_string(config.alpha) << " edges=";
      for (const Edge& e : config.matching.edges()) {
        std::cout << '(' << e.sender << ',' << e.receiver << ')';
      }
      std::cout << '\n';
    }
  }
  if (!args.output.empty()) write_schedule(args.output, sched);
  return kExitOk;
}

struct SimulateArgs {
  std::string trace;
  std::int64_t delta = 1;
  int k = 4;
  std::string offline = "hybrid";
  std::string epsilon = "1/5";
  std::uint64_t seed = 0;
  std::string output;
  bool verbose = false;
};

void require_integral_trace(const Trace<Rat>& trace) {
  for (const auto& step : trace.steps) {
    for (const Rat& v : step.cells()) {
      if (!is_integral(v)) {
        throw InvariantError("simulate requires integral traces (the online model is discrete)");
      }
    }
  }
}

int run_simulate(const SimulateArgs& args) {
  Trace<Rat> trace = parse_trace(args.trace);
  require_integral_trace(trace);
  const Rat epsilon = parse_rat_arg(args.epsilon, "--epsilon");

  if (args.delta == 0) {
    OnlineRun<std::int64_t> run = online_no_delay(trace);
    std::cout << "mode: no-delay greedy\n"
              << "steps: " << run.actions.size() << "\n"
              << "sent: " << run.total_sent << "\n";
    if (args.verbose) {
      for (std::size_t t = 0; t < run.actions.size(); ++t) {
        std::cout << "  t=" << t + 1 << " |M|=" << run.actions[t].matching.size() << '\n';
      }
    }
    return kExitOk;
  }

  OfflineSolver<Rat> solver;
  if (args.offline == "greedy") {
    solver = [](const DemandMatrix<Rat>& d, const Rat& delta, const Rat& window, RngStream) {
      return greedy_schedule(Instance<Rat>(d, delta, window));
    };
  } else if (args.offline == "oracle") {
    solver = [](const DemandMatrix<Rat>& d, const Rat& delta, const Rat& window, RngStream) {
      return optimal_schedule_integer(Instance<Rat>(d, delta, window)).schedule;
    };
  } else {
    solver = [epsilon](const DemandMatrix<Rat>& d, const Rat& delta, const Rat& window,
                       RngStream stream) {
      return snap_schedule_to_whole_steps(
          hybrid_schedule(Instance<Rat>(d, delta, window), epsilon, stream.next_u64()));
    };
  }

  OnlineRun<Rat> run = online_blocked(trace, Rat(args.delta), args.k, solver, args.seed);
  std::cout << "mode: blocked reduction (k=" << args.k << ", delta=" << args.delta
            << ", offline=" << args.offline << ")\n"
            << "horizon: " << trace.horizon() << " steps, run length " << run.actions.size()
            << " steps\n"
            << "blocks: " << run.blocks.size() << "\n"
            << "sent: " << rat_to_string(run.total_sent) << "\n";
  if (args.verbose) {
    for (std::size_t b = 0; b < run.blocks.size(); ++b) {
      std::cout << "  block " << b << ": " << run.blocks[b].configs.size() << " configurations\n";
    }
  }
  if (!args.output.empty()) {
    Json out;
    out["sent"] = rat_to_string(run.total_sent);
    out["run_steps"] = run.actions.size();
    Json blocks = Json::array();
    for (const auto& block : run.blocks) blocks.push_back(schedule_to_json(block));
    out["blocks"] = std::move(blocks);
    detail::save_json_file(args.output, out);
  }
  return kExitOk;
}

struct BenchArgs {
  std::string config;
  std::string output_prefix = "bench";
  bool timings = false;
};

int run_bench(const BenchArgs& args, const std::optional<std::uint64_t>& seed,
              const std::optional<int>& threads) {
  BenchConfig config = bench_config_from_json(detail::load_json_file(args.config));
  if (seed) config.seed = *seed;
  if (threads) config.threads = *threads;
  BenchReport report = run_benchmark(config, args.timings);

  const std::string csv_path = args.output_prefix + ".csv";
  const std::string summary_path = args.output_prefix + ".summary.json";
  std::ofstream csv(csv_path);
  if (!csv) throw ParseError("cannot open " + csv_path + " for writing");
  csv << report.csv;
  std::ofstream summary(summary_path);
  if (!summary) throw ParseError("cannot open " + summary_path + " for writing");
  summary << report.summary_json;
  std::cout << "wrote " << csv_path << " and " << summary_path << "\n" << report.summary_json;
  return kExitOk;
}

struct GenArgs {
  std::string kind = "instance";
  std::string output;
  int n = 3;
  int m = 3;
  int steps = 9;
  std::int64_t max_demand = 3;
  int density = 60;
  std::string delta = "1";
  std::string window = "6";
  std::uint64_t seed = 0;
};

int run_gen(const GenArgs& args) {
  RngStream stream(args.seed, "generator");
  const Rat delta = parse_rat_arg(args.delta, "--delta");
  const Rat window = parse_rat_arg(args.window, "--window");
  if (args.kind == "instance") {
    RngStream it = stream.child(0);
    std::vector<Rat> cells(static_cast<std::size_t>(args.n) * args.m);
    for (auto& cell : cells) {
      if (it.next_in(1, 100) <= args.density) cell = Rat(it.next_in(1, args.max_demand));
    }
    write_instance(args.output,
                   Instance<Rat>(DemandMatrix<Rat>(args.n, args.m, std::move(cells)), delta, window));
  } else if (args.kind == "trace") {
    RngStream it = stream.child(1);
    Trace<Rat> trace;
    trace.senders = args.n;
    trace.receivers = args.m;
    for (int t = 0; t < args.steps; ++t) {
      DemandMatrix<Rat> step(args.n, args.m);
      for (int s = 0; s < args.n; ++s) {
        for (int r = 0; r < args.m; ++r) {
          if (it.next_in(1, 100) <= args.density) step(s, r) = Rat(it.next_in(1, args.max_demand));
        }
      }
      trace.steps.push_back(std::move(step));
    }
    write_trace(args.output, trace);
  } else {  // adversarial
    std::optional<std::int64_t> w = to_int64(window);
    if (!w) throw InvariantError("adversarial traces need an integer window");
    write_trace(args.output, adversarial_trace<Rat>(args.n, delta, *w, stream.child(2)));
  }
  std::cout << "wrote " << args.output << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circuit switch scheduling toolkit"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "solve an offline instance");
  solve->add_option("--input", solve_args.input, "instance JSON file")->required();
  solve->add_option("--algo", solve_args.algo, "greedy|lp|hybrid|oracle")
      ->check(CLI::IsMember({"greedy", "lp", "hybrid", "oracle"}));
  solve->add_option("--epsilon", solve_args.epsilon, "accuracy parameter (rational or decimal)");
  solve->add_option("--k", solve_args.k, "slot budget for --algo lp");
  solve->add_option("--seed", solve_args.seed, "root seed for randomized rounding");
  solve->add_option("--output", solve_args.output, "write the schedule JSON here");
  solve->add_flag("--verbose", solve_args.verbose, "print configurations and LP diagnostics");

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "run the online model over a trace");
  sim->add_option("--trace", sim_args.trace, "trace JSON file")->required();
  sim->add_option("--delta", sim_args.delta,
                  "switching delay in steps; 0 selects the no-delay greedy");
  sim->add_option("--k", sim_args.k, "block parameter (k >= 3)");
  sim->add_option("--offline", sim_args.offline, "offline handle: greedy|hybrid|oracle")
      ->check(CLI::IsMember({"greedy", "hybrid", "oracle"}));
  sim->add_option("--epsilon", sim_args.epsilon, "epsilon for the hybrid handle");
  sim->add_option("--seed", sim_args.seed, "root seed");
  sim->add_option("--output", sim_args.output, "write the run summary JSON here");
  sim->add_flag("--verbose", sim_args.verbose, "print per-block detail");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--config", bench_args.config, "suite config JSON")->required();
  bench->add_option("--output-prefix", bench_args.output_prefix,
                    "prefix for .csv and .summary.json");
  std::uint64_t bench_seed = 0;
  int bench_threads = 0;
  CLI::Option* seed_opt = bench->add_option("--seed", bench_seed, "override the config seed");
  CLI::Option* threads_opt = bench->add_option("--threads", bench_threads, "worker threads");
  bench->add_flag("--timings", bench_args.timings,
                  "fill the wall_ms column (breaks byte-reproducibility)");

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate instances and traces");
  gen->add_option("--kind", gen_args.kind, "instance|trace|adversarial")
      ->check(CLI::IsMember({"instance", "trace", "adversarial"}));
  gen->add_option("--output", gen_args.output, "output file")->required();
  gen->add_option("--n", gen_args.n, "senders");
  gen->add_option("--m", gen_args.m, "receivers");
  gen->add_option("--steps", gen_args.steps, "trace length");
  gen->add_option("--max-demand", gen_args.max_demand, "largest generated entry");
  gen->add_option("--density", gen_args.density, "percent chance an entry is nonzero");
  gen->add_option("--delta", gen_args.delta, "switching delay");
  gen->add_option("--window", gen_args.window, "time window");
  gen->add_option("--seed", gen_args.seed, "root seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (sim->parsed()) return run_simulate(sim_args);
    if (bench->parsed()) {
      std::optional<std::uint64_t> seed;
      std::optional<int> threads;
      if (*seed_opt) seed = bench_seed;
      if (*threads_opt) threads = bench_threads;
      return run_bench(bench_args, seed, threads);
    }
    if (gen->parsed()) return run_gen(gen_args);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const BudgetError& e) {
    std::cerr << "budget guard: " << e.what() << '\n';
    return kExitBudget;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitOk;
}

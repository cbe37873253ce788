#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "csched/core.hpp"
#include "csched/matching.hpp"
#include "csched/rng.hpp"

namespace csched {

// Per-step arrivals for the online model.
template <typename S>
struct Trace {
  int senders = 0;
  int receivers = 0;
  std::vector<DemandMatrix<S>> steps;

  int horizon() const { return static_cast<int>(steps.size()); }

  void validate() const {
    for (const auto& step : steps) {
      if (step.senders() != senders || step.receivers() != receivers) {
        throw InvariantError("trace steps must share the trace dimensions");
      }
    }
  }
};

enum class StepAction { kSend, kSwitch, kIdle };

template <typename S>
struct OnlineRun {
  struct Step {
    StepAction action = StepAction::kIdle;
    Matching matching;  // nonempty only for sends
  };
  std::vector<Step> actions;           // one entry per executed time step
  std::vector<Schedule<S>> blocks;     // realized block schedules (delay model)
  S total_sent{};
};

namespace detail {

template <typename S>
MultiEdgeSet to_multi_edge_set(const DemandMatrix<S>& demand) {
  MultiEdgeSet out(demand.senders(), demand.receivers());
  for (int s = 0; s < demand.senders(); ++s) {
    for (int r = 0; r < demand.receivers(); ++r) {
      std::int64_t units;
      if constexpr (std::is_same_v<S, Rat>) {
        std::optional<std::int64_t> v = to_int64(demand(s, r));
        if (!v) throw InvariantError("no-delay traces must be integral multigraphs");
        units = *v;
      } else {
        units = demand(s, r);
      }
      out.at(s, r) = units;
    }
  }
  return out;
}

}  // namespace detail

// No-delay online greedy: each step sends a maximum-cardinality matching of
// the residual multigraph plus the new arrivals.
template <typename S>
OnlineRun<std::int64_t> online_no_delay(const Trace<S>& trace) {
  trace.validate();
  OnlineRun<std::int64_t> run;
  MultiEdgeSet residual_edges(trace.senders, trace.receivers);
  for (const auto& step : trace.steps) {
    residual_edges.add(detail::to_multi_edge_set(step));
    Matching sent = max_cardinality_matching(residual_edges);
    residual_edges.remove(sent);
    run.total_sent += sent.size();
    if (sent.empty()) {
      run.actions.push_back({StepAction::kIdle, {}});
    } else {
      run.actions.push_back({StepAction::kSend, std::move(sent)});
    }
  }
  return run;
}

// Offline black box used by the blocked reduction: given the accumulated
// demand, a delay and a window, return a feasible schedule. The stream is the
// box's private randomness for the block being solved.
template <typename S>
using OfflineSolver =
    std::function<Schedule<S>(const DemandMatrix<S>& demand, const S& delta, const S& window,
                              RngStream stream)>;

// Blocked reduction to the offline solver. Arrivals are aggregated over
// blocks of k*delta steps; the schedule computed for block r executes during
// block r+1, and the final block executes in a k*delta-step extension past
// the horizon, which is the bi-criteria allowance. Demand is credited at
// block granularity.
template <typename S>
OnlineRun<S> online_blocked(const Trace<S>& trace, const S& delta, int k,
                            const OfflineSolver<S>& offline, std::uint64_t seed) {
  trace.validate();
  if (k < 3) throw InvariantError("online_blocked requires k >= 3");
  std::int64_t delta_steps;
  if constexpr (std::is_same_v<S, Rat>) {
    std::optional<std::int64_t> v = to_int64(delta);
    if (!v || *v < 1) throw InvariantError("online_blocked requires an integer delta >= 1");
    delta_steps = *v;
  } else {
    if (delta < 1) throw InvariantError("online_blocked requires an integer delta >= 1");
    delta_steps = delta;
  }
  const std::int64_t block_len = static_cast<std::int64_t>(k) * delta_steps;
  const S window = delta * S(k);
  const std::int64_t horizon = trace.horizon();
  const std::int64_t blocks = (horizon + block_len - 1) / block_len;  // short tail padded with zeros

  OnlineRun<S> run;
  if (horizon == 0) return run;
  RngStream stream(seed, "online-blocked");
  DemandMatrix<S> pending(trace.senders, trace.receivers);
  run.actions.assign(static_cast<std::size_t>((blocks + 1) * block_len), {StepAction::kIdle, {}});

  for (std::int64_t r = 0; r < blocks; ++r) {
    for (std::int64_t j = r * block_len; j < std::min((r + 1) * block_len, horizon); ++j) {
      const DemandMatrix<S>& arrival = trace.steps[static_cast<std::size_t>(j)];
      for (int s = 0; s < pending.senders(); ++s) {
        for (int t = 0; t < pending.receivers(); ++t) pending(s, t) += arrival(s, t);
      }
    }
    Schedule<S> block = offline(pending, delta, window, stream.child(static_cast<std::uint64_t>(r)));
    if (block.delta != delta || block.time_used() > window) {
      throw InvariantError("offline handle returned an infeasible block schedule");
    }

    // lay the block schedule into the steps of block r+1
    std::int64_t cursor = (r + 1) * block_len;
    for (const auto& config : block.configs) {
      std::int64_t alpha_steps;
      if constexpr (std::is_same_v<S, Rat>) {
        std::optional<std::int64_t> v = to_int64(config.alpha);
        if (!v) throw InvariantError("offline handle returned a non-integral duration");
        alpha_steps = *v;
      } else {
        alpha_steps = config.alpha;
      }
      for (std::int64_t d = 0; d < delta_steps; ++d) {
        run.actions[static_cast<std::size_t>(cursor++)] = {StepAction::kSwitch, {}};
      }
      for (std::int64_t d = 0; d < alpha_steps; ++d) {
        run.actions[static_cast<std::size_t>(cursor++)] = {StepAction::kSend, config.matching};
      }
    }

    run.total_sent += evaluate_throughput(block, pending);
    pending = residual(pending, block);
    run.blocks.push_back(std::move(block));
  }
  return run;
}

// Floors durations to whole steps and drops emptied configurations. The
// discrete run executes configurations in whole steps only, so offline
// solvers producing grid-valued durations are wrapped with this before being
// used as a blocked-reduction handle.
inline Schedule<Rat> snap_schedule_to_whole_steps(Schedule<Rat> sched) {
  std::vector<Configuration<Rat>> kept;
  for (auto& config : sched.configs) {
    const Rat floored(rat_floor(config.alpha));
    if (floored > 0) kept.emplace_back(std::move(config.matching), floored);
  }
  sched.configs = std::move(kept);
  return sched;
}

// Arrival sequence that forces the bi-criteria allowance: silence until the
// last step of the window, then a uniformly random perfect matching of unit
// demands.
template <typename S>
Trace<S> adversarial_trace(int n, const S& delta, std::int64_t window, RngStream stream) {
  if (n < 1) throw InvariantError("adversarial trace needs at least one sender");
  if (delta < 0) throw InvariantError("delta must be nonnegative");
  if (S(window) < delta + S(1)) {
    throw InvariantError("adversarial trace requires window >= delta + 1");
  }
  Trace<S> trace;
  trace.senders = n;
  trace.receivers = n;
  trace.steps.assign(static_cast<std::size_t>(window), DemandMatrix<S>(n, n));

  std::vector<int> receivers(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) receivers[i] = i;
  for (int i = n - 1; i > 0; --i) {
    std::swap(receivers[i], receivers[stream.next_in(0, i)]);
  }
  DemandMatrix<S>& last = trace.steps.back();
  for (int i = 0; i < n; ++i) last(i, receivers[i]) = S(1);
  return trace;
}

}  // namespace csched

#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "csched/core.hpp"
#include "csched/matching.hpp"

namespace csched {

template <typename S>
struct BestConfiguration {
  Matching matching;
  S alpha{};
  S gain{};  // data sent by (matching, alpha) against the residual

  // gain / (alpha + delta), as an exact rational
  Rat ratio(const S& delta) const { return to_rat(gain) / to_rat(S(alpha + delta)); }
};

// Configuration maximizing data sent per unit of time, gain/(alpha + delta).
// alpha only needs to range over the distinct positive residual entries: the
// per-edge totals are piecewise linear in alpha with breakpoints exactly
// there, and a linear-over-affine ratio is monotone between breakpoints. Ties
// go to the smallest alpha. Returns nothing once the residual is all zero.
template <typename S>
std::optional<BestConfiguration<S>> best_configuration(const DemandMatrix<S>& residual_demand,
                                                       const S& delta) {
  if (delta < S(0)) throw InvariantError("delta must be nonnegative");
  std::vector<S> alphas(residual_demand.cells());
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  std::optional<BestConfiguration<S>> best;
  for (const S& alpha : alphas) {
    if (alpha <= S(0)) continue;
    WeightMatrix<S> w(residual_demand.senders(), residual_demand.receivers());
    for (int s = 0; s < w.senders(); ++s) {
      for (int r = 0; r < w.receivers(); ++r) {
        w(s, r) = std::min(residual_demand(s, r), alpha);
      }
    }
    MatchingResult<S> mw = max_weight_matching(w);
    if (mw.weight == S(0)) continue;
    // cross-multiplied gain/(alpha+delta) comparison; strict, so the
    // ascending scan keeps the smallest alpha on ties
    if (!best || mw.weight * (best->alpha + delta) > best->gain * (alpha + delta)) {
      best = BestConfiguration<S>{std::move(mw.matching), alpha, mw.weight};
    }
  }
  return best;
}

// Repeatedly schedules the best configuration; if the last pick overshoots the
// window its duration is truncated to the remaining budget, or the pick is
// dropped when no budget remains. Zero-duration configurations are never
// emitted.
template <typename S>
Schedule<S> greedy_schedule(const Instance<S>& inst) {
  Schedule<S> sched;
  sched.delta = inst.delta;
  sched.window = inst.window;

  DemandMatrix<S> rem = inst.demand;
  S time_used(0);
  while (time_used <= inst.window) {
    std::optional<BestConfiguration<S>> pick = best_configuration(rem, inst.delta);
    if (!pick) break;
    for (const Edge& e : pick->matching.edges()) {
      S& cell = rem(e.sender, e.receiver);
      cell -= std::min(cell, pick->alpha);
    }
    time_used += pick->alpha + inst.delta;
    sched.configs.emplace_back(std::move(pick->matching), pick->alpha);
  }

  if (time_used > inst.window && !sched.configs.empty()) {
    const S last_alpha = sched.configs.back().alpha;
    // beta = W - delta - sum of (alpha_j + delta) over the earlier picks
    S beta = inst.window - inst.delta - (time_used - last_alpha - inst.delta);
    if (beta > S(0)) {
      sched.configs.back().alpha = beta;
    } else {
      sched.configs.pop_back();
    }
  }
  return sched;
}

}  // namespace csched

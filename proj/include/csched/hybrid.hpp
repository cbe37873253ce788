#pragma once

#include <cstdint>
#include <ostream>

#include "csched/greedy.hpp"
#include "csched/lp.hpp"

namespace csched {

// Rational stand-ins for the irrational dispatch constants. The dispatch
// coefficient is truncated at 1e-15, below its true value, so borderline
// instances fall to the LP branch, for which any k at least the true
// configuration count is valid.

// e/(2(e-1)) = 0.790988353434663212...
inline const Rat& greedy_dispatch_coefficient() {
  static const Rat c(Int(790988353434663LL), Int(1000000000000000LL));
  return c;
}

// 1 - 1/e = 0.632120558828557678...
inline const Rat& approx_ratio_upper_bound() {
  static const Rat c(Int(632120558828557LL), Int(1000000000000000LL));
  return c;
}

// 2(e-1)/e = 1.264241117657115357..., rounded up at 1e-7
inline const Rat& config_count_coefficient() {
  static const Rat c(Int(12642412LL), Int(10000000LL));
  return c;
}

// Greedy when the switching delay is small next to the window, otherwise the
// configuration-LP machinery with k = floor(W/delta) slots (each
// configuration costs at least delta, so no schedule holds more), capped by
// the configuration count the dispatch threshold already implies.
inline Schedule<Rat> hybrid_schedule(const Instance<Rat>& inst, const Rat& epsilon,
                                     std::uint64_t seed, std::ostream* diag_sink = nullptr) {
  if (!(epsilon > 0 && epsilon < approx_ratio_upper_bound())) {
    throw InvariantError("hybrid epsilon must lie in (0, 1 - 1/e)");
  }
  if (inst.window == 0) {
    Schedule<Rat> empty;
    empty.delta = inst.delta;
    empty.window = inst.window;
    return empty;
  }
  if (inst.delta <= greedy_dispatch_coefficient() * epsilon * inst.window) {
    return greedy_schedule(inst);
  }
  const Int by_window = rat_floor(inst.window / inst.delta);
  const Int by_count = rat_floor(config_count_coefficient() / epsilon) + 1;
  const Int k = std::min(by_window, by_count);
  if (k < 1) {  // delta exceeds the window; nothing fits
    Schedule<Rat> empty;
    empty.delta = inst.delta;
    empty.window = inst.window;
    return empty;
  }
  return lp_schedule(inst, k.convert_to<int>(), epsilon, seed, diag_sink);
}

}  // namespace csched

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "csched/core.hpp"
#include "csched/matching.hpp"

namespace csched {

// Exhaustive ground truth at desk scale. Values are reproducible bit-exactly:
// the search scans matchings in enumeration order and durations descending,
// and keeps the first maximizer.

inline constexpr int kOracleMaxCells = 9;
inline constexpr std::int64_t kOracleMaxWindow = 12;

template <typename S>
struct OracleResult {
  Schedule<S> schedule;
  S value{};
};

namespace detail {

struct IntSearchState {
  const std::vector<Matching>* matchings = nullptr;
  std::vector<std::int64_t> residual;
  int receivers = 0;
  std::int64_t delta = 0;
  int max_configs = 0;
  std::int64_t best = -1;
  std::vector<Configuration<std::int64_t>> current;
  std::vector<Configuration<std::int64_t>> best_configs;
};

inline std::int64_t residual_upper_bound(const IntSearchState& st, std::int64_t data_budget) {
  if (data_budget <= 0) return 0;
  // sum of per-edge caps, then tightened by per-sender and per-receiver caps
  std::int64_t per_edge = 0;
  for (std::int64_t v : st.residual) per_edge += std::min(v, data_budget);
  const int m = st.receivers;
  const int n = static_cast<int>(st.residual.size()) / m;
  std::int64_t rows = 0;
  for (int s = 0; s < n; ++s) {
    std::int64_t row = 0;
    for (int r = 0; r < m; ++r) row += st.residual[static_cast<std::size_t>(s) * m + r];
    rows += std::min(row, data_budget);
  }
  std::int64_t cols = 0;
  for (int r = 0; r < m; ++r) {
    std::int64_t col = 0;
    for (int s = 0; s < n; ++s) col += st.residual[static_cast<std::size_t>(s) * m + r];
    cols += std::min(col, data_budget);
  }
  return std::min(per_edge, std::min(rows, cols));
}

// Matchings are scanned in increasing index with each used at most once: a
// matching repeated in a schedule merges into one configuration of summed
// duration at strictly smaller time cost, so restricting to distinct
// matchings loses nothing.
inline void search_int_schedules(IntSearchState& st, int next_index, std::int64_t time_left,
                                 int configs_left, std::int64_t acc) {
  if (acc > st.best) {
    st.best = acc;
    st.best_configs = st.current;
  }
  if (configs_left == 0) return;
  const std::int64_t bound = residual_upper_bound(st, time_left - st.delta);
  if (acc + bound <= st.best) return;
  const auto& pool = *st.matchings;
  for (int idx = next_index; idx < static_cast<int>(pool.size()); ++idx) {
    const Matching& m = pool[idx];
    std::int64_t cap = 0;
    for (const Edge& e : m.edges()) {
      cap = std::max(cap, st.residual[static_cast<std::size_t>(e.sender) * st.receivers + e.receiver]);
    }
    const std::int64_t max_alpha = std::min(cap, time_left - st.delta);
    for (std::int64_t alpha = max_alpha; alpha >= 1; --alpha) {
      std::int64_t gain = 0;
      for (const Edge& e : m.edges()) {
        gain += std::min(st.residual[static_cast<std::size_t>(e.sender) * st.receivers + e.receiver], alpha);
      }
      if (gain == 0) break;
      std::vector<std::int64_t> saved;
      saved.reserve(m.size());
      for (const Edge& e : m.edges()) {
        std::int64_t& cell = st.residual[static_cast<std::size_t>(e.sender) * st.receivers + e.receiver];
        saved.push_back(cell);
        cell -= std::min(cell, alpha);
      }
      st.current.emplace_back(m, alpha);
      search_int_schedules(st, idx + 1, time_left - alpha - st.delta, configs_left - 1, acc + gain);
      st.current.pop_back();
      std::size_t k = 0;
      for (const Edge& e : m.edges()) {
        st.residual[static_cast<std::size_t>(e.sender) * st.receivers + e.receiver] = saved[k++];
      }
    }
  }
}

}  // namespace detail

// Exact optimum over schedules of (matching, integer duration >= 1) pairs with
// total time within the window. The value lower-bounds the real-duration
// optimum; certificate suites use it as the comparison baseline.
inline OracleResult<std::int64_t> optimal_schedule_integer(
    const Instance<std::int64_t>& inst, std::optional<int> max_configs = std::nullopt) {
  const int n = inst.demand.senders();
  const int m = inst.demand.receivers();
  if (n * m > kOracleMaxCells) {
    throw BudgetError("oracle refuses instances with more than 9 demand cells");
  }
  if (inst.window > kOracleMaxWindow) {
    throw BudgetError("oracle refuses windows longer than 12");
  }
  if (inst.delta < 0) throw InvariantError("delta must be nonnegative");

  detail::IntSearchState st;
  std::vector<Matching> pool = enumerate_matchings(n, m);
  pool.erase(pool.begin());  // drop the empty matching
  st.matchings = &pool;
  st.residual = inst.demand.cells();
  st.receivers = m;
  st.delta = inst.delta;
  const std::int64_t hard_cap =
      inst.delta + 1 > 0 ? inst.window / (inst.delta + 1) : inst.window;
  int cap = static_cast<int>(std::min<std::int64_t>(hard_cap, pool.size()));
  if (max_configs) cap = std::min(cap, std::max(0, *max_configs));

  detail::search_int_schedules(st, 0, inst.window, cap, 0);

  OracleResult<std::int64_t> out;
  out.value = std::max<std::int64_t>(st.best, 0);
  out.schedule.delta = inst.delta;
  out.schedule.window = inst.window;
  out.schedule.configs = std::move(st.best_configs);
  return out;
}

// Rational-facing wrapper; requires an integral instance.
inline OracleResult<Rat> optimal_schedule_integer(const Instance<Rat>& inst,
                                                  std::optional<int> max_configs = std::nullopt) {
  auto as_int = [](const Rat& v, const char* what) -> std::int64_t {
    std::optional<std::int64_t> i = to_int64(v);
    if (!i) throw BudgetError(std::string("oracle requires integral ") + what);
    return *i;
  };
  std::vector<std::int64_t> cells;
  cells.reserve(inst.demand.cells().size());
  for (const Rat& v : inst.demand.cells()) cells.push_back(as_int(v, "demands"));
  Instance<std::int64_t> conv(
      DemandMatrix<std::int64_t>(inst.demand.senders(), inst.demand.receivers(), std::move(cells)),
      as_int(inst.delta, "delta"), as_int(inst.window, "window"));
  OracleResult<std::int64_t> got = optimal_schedule_integer(conv, max_configs);
  OracleResult<Rat> out;
  out.value = Rat(got.value);
  out.schedule.delta = inst.delta;
  out.schedule.window = inst.window;
  for (const auto& c : got.schedule.configs) out.schedule.configs.emplace_back(c.matching, Rat(c.alpha));
  return out;
}

inline constexpr int kOnlineOracleMaxSteps = 4;
inline constexpr std::int64_t kOnlineOracleMaxEdgesPerStep = 3;
inline constexpr int kOnlineOracleMaxSide = 3;

struct OnlineOracleResult {
  std::vector<Matching> matchings;
  std::int64_t total = 0;
};

namespace detail {

inline void search_online(const std::vector<MultiEdgeSet>& steps, std::size_t t, MultiEdgeSet& carry,
                          const std::vector<Matching>& pool, std::vector<Matching>& current,
                          std::int64_t acc, OnlineOracleResult& best) {
  if (t == steps.size()) {
    if (acc > best.total) {
      best.total = acc;
      best.matchings = current;
    }
    return;
  }
  carry.add(steps[t]);
  const MultiEdgeSet snapshot = carry;
  for (const Matching& m : pool) {
    bool fits = true;
    for (const Edge& e : m.edges()) {
      if (carry.at(e.sender, e.receiver) < 1) {
        fits = false;
        break;
      }
    }
    if (!fits) continue;
    carry.remove(m);
    current.push_back(m);
    search_online(steps, t + 1, carry, pool, current, acc + m.size(), best);
    current.pop_back();
    carry = snapshot;
  }
  for (std::size_t i = 0; i < carry.multiplicity.size(); ++i) {
    carry.multiplicity[i] -= steps[t].multiplicity[i];
  }
}

}  // namespace detail

// Exhaustive per-step matching choice maximizing the number of sent edges.
inline OnlineOracleResult optimal_online_no_delay(const std::vector<MultiEdgeSet>& steps) {
  if (steps.size() > kOnlineOracleMaxSteps) {
    throw BudgetError("online oracle refuses traces longer than 4 steps");
  }
  if (steps.empty()) return {};
  const int n = steps.front().senders;
  const int m = steps.front().receivers;
  for (const MultiEdgeSet& s : steps) {
    if (s.senders != n || s.receivers != m) {
      throw InvariantError("trace steps must share dimensions");
    }
    if (s.total() > kOnlineOracleMaxEdgesPerStep) {
      throw BudgetError("online oracle refuses steps with more than 3 unit edges");
    }
  }
  if (n > kOnlineOracleMaxSide || m > kOnlineOracleMaxSide) {
    throw BudgetError("online oracle refuses graphs larger than 3x3");
  }
  OnlineOracleResult best;
  best.total = -1;
  std::vector<Matching> pool = enumerate_matchings(n, m);
  MultiEdgeSet carry(n, m);
  std::vector<Matching> current;
  detail::search_online(steps, 0, carry, pool, current, 0, best);
  if (best.total < 0) best.total = 0;
  return best;
}

}  // namespace csched

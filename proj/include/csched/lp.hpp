#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <vector>

#include "csched/core.hpp"
#include "csched/greedy.hpp"
#include "csched/matching.hpp"
#include "csched/rng.hpp"

namespace csched {

// Candidate durations for the k time slots. Zero entries are allowed; every
// slot is still charged one switching delay, so the profile as a whole must
// fit the window.
struct DurationProfile {
  std::vector<Rat> durations;  // sorted descending
  Rat delta{};
  Rat window{};

  int slots() const { return static_cast<int>(durations.size()); }

  static DurationProfile validated(std::vector<Rat> durations, Rat delta, Rat window) {
    DurationProfile p;
    p.durations = std::move(durations);
    p.delta = std::move(delta);
    p.window = std::move(window);
    std::sort(p.durations.begin(), p.durations.end(), std::greater<Rat>());
    Rat total(0);
    for (const Rat& a : p.durations) {
      if (a < 0) throw InvariantError("profile durations must be nonnegative");
      total += a + p.delta;
    }
    if (total > p.window) throw InvariantError("profile exceeds the window");
    return p;
  }
};

inline constexpr std::int64_t kMaxEnumeratedProfiles = 2'000'000;

// All k-tuples over the grid {0, g, 2g, ...} with g = epsilon*(W - k*delta)/k
// that fit the window, deduplicated to sorted-descending order (slots are
// interchangeable before rounding). Empty when k*delta > W.
inline std::vector<DurationProfile> enumerate_duration_profiles(const Rat& window, const Rat& delta,
                                                                int k, const Rat& epsilon) {
  if (k < 1) throw InvariantError("profile enumeration requires k >= 1");
  if (!(epsilon > 0 && epsilon <= 1)) throw InvariantError("epsilon must lie in (0, 1]");
  if (delta < 0 || window < 0) throw InvariantError("delta and window must be nonnegative");
  std::vector<DurationProfile> out;
  if (Rat(k) * delta > window) return out;

  const Rat budget = window - Rat(k) * delta;  // total duration allowance
  if (budget == 0) {
    DurationProfile p;
    p.durations.assign(static_cast<std::size_t>(k), Rat(0));
    p.delta = delta;
    p.window = window;
    out.push_back(std::move(p));
    return out;
  }
  const Rat grid = epsilon * budget / k;
  const Int total_steps = rat_floor(budget / grid);  // = floor(k/epsilon)
  if (total_steps > kMaxEnumeratedProfiles) {
    throw BudgetError("profile grid too fine; raise epsilon or lower k");
  }
  const std::int64_t cap = total_steps.convert_to<std::int64_t>();

  std::vector<std::int64_t> steps(static_cast<std::size_t>(k), 0);
  auto recurse = [&](auto&& self, int slot, std::int64_t prev, std::int64_t left) -> void {
    if (slot == k) {
      DurationProfile p;
      p.delta = delta;
      p.window = window;
      p.durations.reserve(static_cast<std::size_t>(k));
      for (std::int64_t s : steps) p.durations.push_back(grid * s);
      out.push_back(std::move(p));
      return;
    }
    for (std::int64_t c = std::min(prev, left); c >= 0; --c) {
      steps[static_cast<std::size_t>(slot)] = c;
      self(self, slot + 1, c, left - c);
    }
    if (static_cast<std::int64_t>(out.size()) > kMaxEnumeratedProfiles) {
      throw BudgetError("profile enumeration exceeded its budget");
    }
  };
  recurse(recurse, 0, cap, cap);
  return out;
}

// One fractional matching assignment: weight of `matching` in time slot `slot`.
struct LpColumn {
  int slot = 0;
  Matching matching;
  Rat weight{};
};

struct FractionalSolution {
  std::vector<LpColumn> columns;  // nonzero weights, sorted by (slot, matching)
  DemandMatrix<Rat> edge_flow;    // z_e
  Rat objective{};                // Z_LP = sum of z_e
};

struct DualPrices {
  std::vector<Rat> slot_price;         // y_i, one per slot
  DemandMatrix<Rat> demand_price;      // a_e, dual of z_e <= D_e
  DemandMatrix<Rat> capacity_price;    // b_e, dual of the coverage constraint
};

struct PricedColumn {
  Matching matching;
  Rat violation;
};

// Separation for one slot: the dual constraint y_i >= alpha_i * sum of b_e
// over a matching is violated iff the maximum-weight matching under b beats
// y_i / alpha_i. Slots of zero duration have no constraint.
inline std::optional<PricedColumn> price_matching(const DualPrices& duals, int slot,
                                                  const Rat& alpha) {
  if (alpha < 0) throw InvariantError("slot duration must be nonnegative");
  if (slot < 0 || slot >= static_cast<int>(duals.slot_price.size())) {
    throw InvariantError("price_matching: slot out of range");
  }
  if (alpha == 0) return std::nullopt;
  MatchingResult<Rat> best = max_weight_matching(duals.capacity_price);
  const Rat violation = alpha * best.weight - duals.slot_price[slot];
  if (violation > 0) return PricedColumn{std::move(best.matching), violation};
  return std::nullopt;
}

namespace detail {

struct SimplexOutcome {
  Rat objective;
  std::vector<Rat> primal;
  std::vector<Rat> duals;
};

// Dense exact simplex for max{c x : A x <= b, x >= 0} with b >= 0, so the
// slack basis is the feasible start. Bland's rule on both choices rules out
// cycling under degeneracy.
inline SimplexOutcome solve_max_simplex(const std::vector<std::vector<Rat>>& a,
                                        std::vector<Rat> b, const std::vector<Rat>& c) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  std::vector<std::vector<Rat>> t(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    t[i].assign(static_cast<std::size_t>(n + m), Rat(0));
    for (int j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1;
    if (b[i] < 0) throw InvariantError("simplex requires nonnegative right-hand sides");
  }
  std::vector<Rat> rc(c);
  rc.resize(static_cast<std::size_t>(n + m), Rat(0));
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  Rat objective(0);

  for (;;) {
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (rc[j] > 0) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    Rat best_ratio(0);
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rat ratio = b[i] / t[i][enter];
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) throw InvariantError("simplex: unbounded objective");

    const Rat pivot = t[leave][enter];
    for (Rat& v : t[leave]) v /= pivot;
    b[leave] /= pivot;
    for (int i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rat factor = t[i][enter];
      for (int j = 0; j < n + m; ++j) t[i][j] -= factor * t[leave][j];
      b[i] -= factor * b[leave];
    }
    const Rat rfactor = rc[enter];
    for (int j = 0; j < n + m; ++j) rc[j] -= rfactor * t[leave][j];
    objective += rfactor * b[leave];
    basis[leave] = enter;
  }

  SimplexOutcome out;
  out.objective = std::move(objective);
  out.primal.assign(static_cast<std::size_t>(n), Rat(0));
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) out.primal[basis[i]] = b[i];
  }
  out.duals.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) out.duals.push_back(Rat(0) - rc[n + i]);
  return out;
}

struct LpBuildResult {
  FractionalSolution solution;
  DualPrices duals;
};

// Solves the restricted LP over the given per-slot matching pools and reads
// off both the primal solution and the dual prices.
inline LpBuildResult solve_restricted_lp(const DemandMatrix<Rat>& demand,
                                         const DurationProfile& profile,
                                         const std::vector<std::vector<Matching>>& pools) {
  const int n = demand.senders();
  const int m = demand.receivers();
  const int k = profile.slots();
  std::vector<Edge> edges;
  for (int s = 0; s < n; ++s) {
    for (int r = 0; r < m; ++r) {
      if (demand(s, r) > 0) edges.push_back(Edge{s, r});
    }
  }
  const int ne = static_cast<int>(edges.size());
  auto edge_index = [&](const Edge& e) {
    return static_cast<int>(std::lower_bound(edges.begin(), edges.end(), e) - edges.begin());
  };

  struct Var {
    int slot;
    int pool_pos;
  };
  std::vector<Var> xvars;
  for (int i = 0; i < k; ++i) {
    for (int p = 0; p < static_cast<int>(pools[i].size()); ++p) xvars.push_back({i, p});
  }
  const int nz = ne;
  const int nvars = nz + static_cast<int>(xvars.size());

  // rows: k slot-capacity rows, ne demand rows, ne coverage rows
  const int nrows = k + 2 * ne;
  std::vector<std::vector<Rat>> a(static_cast<std::size_t>(nrows),
                                  std::vector<Rat>(static_cast<std::size_t>(nvars), Rat(0)));
  std::vector<Rat> b(static_cast<std::size_t>(nrows), Rat(0));
  std::vector<Rat> c(static_cast<std::size_t>(nvars), Rat(0));

  for (int e = 0; e < ne; ++e) c[e] = 1;
  for (int i = 0; i < k; ++i) b[i] = 1;
  for (int e = 0; e < ne; ++e) {
    a[k + e][e] = 1;
    b[k + e] = demand(edges[e].sender, edges[e].receiver);
    a[k + ne + e][e] = 1;  // z_e - sum alpha_i x_{M,i} <= 0
  }
  for (int v = 0; v < static_cast<int>(xvars.size()); ++v) {
    const Var& var = xvars[v];
    const int col = nz + v;
    a[var.slot][col] = 1;
    const Matching& match = pools[var.slot][var.pool_pos];
    for (const Edge& e : match.edges()) {
      if (demand(e.sender, e.receiver) > 0) {
        a[k + ne + edge_index(e)][col] -= profile.durations[var.slot];
      }
    }
  }

  SimplexOutcome got = solve_max_simplex(a, std::move(b), c);

  LpBuildResult out{FractionalSolution{{}, DemandMatrix<Rat>(n, m), got.objective},
                    DualPrices{std::vector<Rat>(static_cast<std::size_t>(k), Rat(0)),
                               DemandMatrix<Rat>(n, m), DemandMatrix<Rat>(n, m)}};
  for (int e = 0; e < ne; ++e) {
    out.solution.edge_flow(edges[e].sender, edges[e].receiver) = got.primal[e];
  }
  for (int v = 0; v < static_cast<int>(xvars.size()); ++v) {
    if (got.primal[nz + v] == 0) continue;
    out.solution.columns.push_back(
        LpColumn{xvars[v].slot, pools[xvars[v].slot][xvars[v].pool_pos], got.primal[nz + v]});
  }
  std::sort(out.solution.columns.begin(), out.solution.columns.end(),
            [](const LpColumn& lhs, const LpColumn& rhs) {
              if (lhs.slot != rhs.slot) return lhs.slot < rhs.slot;
              return lhs.matching < rhs.matching;
            });
  for (int i = 0; i < k; ++i) out.duals.slot_price[i] = got.duals[i];
  for (int e = 0; e < ne; ++e) {
    out.duals.demand_price(edges[e].sender, edges[e].receiver) = got.duals[k + e];
    out.duals.capacity_price(edges[e].sender, edges[e].receiver) = got.duals[k + ne + e];
  }
  return out;
}

inline std::vector<std::vector<Matching>> seed_pools(const DemandMatrix<Rat>& demand,
                                                     const DurationProfile& profile) {
  const int k = profile.slots();
  std::vector<std::vector<Matching>> pools(static_cast<std::size_t>(k));
  Instance<Rat> inst(demand, profile.delta, profile.window);
  Schedule<Rat> warm = greedy_schedule(inst);
  for (int i = 0; i < k; ++i) {
    if (profile.durations[i] == 0) continue;
    std::set<Matching> pool;
    WeightMatrix<Rat> w(demand.senders(), demand.receivers());
    for (int s = 0; s < w.senders(); ++s) {
      for (int r = 0; r < w.receivers(); ++r) {
        w(s, r) = std::min(demand(s, r), profile.durations[i]);
      }
    }
    Matching capped = max_weight_matching(w).matching;
    if (!capped.empty()) pool.insert(std::move(capped));
    for (const auto& config : warm.configs) {
      if (!config.matching.empty()) pool.insert(config.matching);
    }
    pools[i].assign(pool.begin(), pool.end());
  }
  return pools;
}

}  // namespace detail

struct LpDiagnostics {
  std::ostream* sink = nullptr;  // JSON lines when set
  int pricing_rounds = 0;
  int columns = 0;
};

// Optimal solution of the configuration LP for one duration profile, solved
// by column generation: solve the restricted problem, price every slot with
// price_matching, add violated columns, repeat until none remain.
inline FractionalSolution solve_configuration_lp(const DemandMatrix<Rat>& demand,
                                                 const DurationProfile& profile,
                                                 LpDiagnostics* diag = nullptr) {
  std::vector<std::vector<Matching>> pools = detail::seed_pools(demand, profile);
  const int k = profile.slots();
  int rounds = 0;
  for (;;) {
    detail::LpBuildResult got = detail::solve_restricted_lp(demand, profile, pools);
    ++rounds;
    bool added = false;
    for (int i = 0; i < k; ++i) {
      std::optional<PricedColumn> priced = price_matching(got.duals, i, profile.durations[i]);
      if (!priced) continue;
      if (std::find(pools[i].begin(), pools[i].end(), priced->matching) != pools[i].end()) {
        throw InvariantError("column generation re-priced a pooled matching");
      }
      pools[i].push_back(std::move(priced->matching));
      added = true;
    }
    if (!added) {
      if (diag) {
        diag->pricing_rounds = rounds;
        diag->columns = 0;
        for (const auto& pool : pools) diag->columns += static_cast<int>(pool.size());
      }
      return std::move(got.solution);
    }
  }
}

inline constexpr int kExhaustiveLpMaxSide = 5;

// Same LP with every matching enumerated explicitly; the oracle route for the
// column-generation path (1546 columns per slot at 5x5).
inline FractionalSolution solve_configuration_lp_exhaustive(const DemandMatrix<Rat>& demand,
                                                            const DurationProfile& profile) {
  if (demand.senders() > kExhaustiveLpMaxSide || demand.receivers() > kExhaustiveLpMaxSide) {
    throw BudgetError("exhaustive LP limited to 5x5 instances");
  }
  std::vector<Matching> all = enumerate_matchings(demand.senders(), demand.receivers());
  all.erase(all.begin());  // empty matching adds nothing
  std::vector<std::vector<Matching>> pools(static_cast<std::size_t>(profile.slots()));
  for (int i = 0; i < profile.slots(); ++i) {
    if (profile.durations[i] > 0) pools[i] = all;
  }
  return detail::solve_restricted_lp(demand, profile, pools).solution;
}

// Independently per slot, picks matching M with probability x_{M,i} (no
// matching with the leftover probability). Deterministic given the stream.
inline Schedule<Rat> round_solution(const FractionalSolution& sol, const DurationProfile& profile,
                                    RngStream stream) {
  Schedule<Rat> sched;
  sched.delta = profile.delta;
  sched.window = profile.window;
  const Int denom = Int(1) << 53;
  for (int i = 0; i < profile.slots(); ++i) {
    Rat total(0);
    for (const LpColumn& col : sol.columns) {
      if (col.slot != i) continue;
      if (col.weight < 0) throw InvariantError("rounding: negative column weight");
      total += col.weight;
    }
    if (total > 1) throw InvariantError("rounding: slot weights sum beyond one");
    if (profile.durations[i] == 0) continue;
    const Rat u(Int(stream.child(static_cast<std::uint64_t>(i)).next_u53()), denom);
    Rat cumulative(0);
    for (const LpColumn& col : sol.columns) {
      if (col.slot != i) continue;
      cumulative += col.weight;
      if (u < cumulative) {
        if (!col.matching.empty()) sched.configs.emplace_back(col.matching, profile.durations[i]);
        break;
      }
    }
  }
  return sched;
}

inline constexpr int kRoundingRepetitions = 8;

namespace detail {

inline void emit_profile_line(std::ostream* sink, int index, const DurationProfile& p,
                              const Rat& z_lp, const LpDiagnostics& diag) {
  if (!sink) return;
  *sink << "{\"event\":\"profile\",\"index\":" << index << ",\"slots\":" << p.slots()
        << ",\"durations\":[";
  for (int i = 0; i < p.slots(); ++i) {
    if (i) *sink << ',';
    *sink << '"' << rat_to_string(p.durations[i]) << '"';
  }
  *sink << "],\"z_lp\":\"" << rat_to_string(z_lp) << "\",\"columns\":" << diag.columns
        << ",\"pricing_rounds\":" << diag.pricing_rounds << "}\n";
}

}  // namespace detail

// Profile sweep + rounding. Profiles of every length up to k are enumerated
// so that "at most k matchings" is the baseline being approximated: a short
// schedule pays only its own switching delays, not k of them. The best
// profile by Z_LP is rounded kRoundingRepetitions times and the realized-best
// schedule wins.
inline Schedule<Rat> lp_schedule(const Instance<Rat>& inst, int k, const Rat& epsilon,
                                 std::uint64_t seed, std::ostream* diag_sink = nullptr) {
  if (k < 1) throw InvariantError("lp_schedule requires k >= 1");
  if (!(epsilon > 0 && epsilon < 1)) throw InvariantError("epsilon must lie in (0, 1)");
  Schedule<Rat> empty;
  empty.delta = inst.delta;
  empty.window = inst.window;
  if (Rat(k) * inst.delta > inst.window) return empty;

  std::vector<DurationProfile> profiles;
  for (int j = 1; j <= k; ++j) {
    std::vector<DurationProfile> part =
        enumerate_duration_profiles(inst.window, inst.delta, j, epsilon);
    profiles.insert(profiles.end(), std::make_move_iterator(part.begin()),
                    std::make_move_iterator(part.end()));
  }
  if (profiles.empty()) return empty;

  int best_index = -1;
  Rat best_z(-1);
  FractionalSolution best_sol;
  for (int i = 0; i < static_cast<int>(profiles.size()); ++i) {
    LpDiagnostics diag;
    FractionalSolution sol = solve_configuration_lp(inst.demand, profiles[i], &diag);
    detail::emit_profile_line(diag_sink, i, profiles[i], sol.objective, diag);
    if (sol.objective > best_z) {
      best_z = sol.objective;
      best_index = i;
      best_sol = std::move(sol);
    }
  }
  if (best_index < 0 || best_z <= 0) return empty;

  RngStream rounding(seed, "lp-rounding");
  Schedule<Rat> best_sched = empty;
  Rat best_f(-1);
  for (int rep = 0; rep < kRoundingRepetitions; ++rep) {
    Schedule<Rat> candidate = round_solution(
        best_sol, profiles[best_index],
        rounding.child(static_cast<std::uint64_t>(best_index)).child(static_cast<std::uint64_t>(rep)));
    const Rat f = evaluate_throughput(candidate, inst.demand);
    if (f > best_f) {
      best_f = f;
      best_sched = std::move(candidate);
    }
  }
  if (diag_sink) {
    *diag_sink << "{\"event\":\"selected\",\"index\":" << best_index << ",\"z_lp\":\""
               << rat_to_string(best_z) << "\",\"realized_f\":\"" << rat_to_string(best_f)
               << "\"}\n";
  }
  return best_sched;
}

}  // namespace csched

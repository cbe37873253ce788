#pragma once

#include <cstdint>
#include <vector>

#include "csched/core.hpp"
#include "csched/errors.hpp"

namespace csched {

// Edge weights for the matching kernels: min(R_e, alpha) in the greedy step,
// dual prices b_e in LP pricing.
template <typename S>
using WeightMatrix = DemandMatrix<S>;

// Parallel unit-demand edges; the residual multigraph of the no-delay online
// model.
struct MultiEdgeSet {
  int senders = 0;
  int receivers = 0;
  std::vector<std::int64_t> multiplicity;  // row-major, >= 0

  MultiEdgeSet() = default;
  MultiEdgeSet(int n, int m)
      : senders(n), receivers(m), multiplicity(static_cast<std::size_t>(n) * m, 0) {}
  MultiEdgeSet(int n, int m, std::vector<std::int64_t> mult)
      : senders(n), receivers(m), multiplicity(std::move(mult)) {
    if (multiplicity.size() != static_cast<std::size_t>(n) * m) {
      throw InvariantError("multiplicity cell count does not match dimensions");
    }
    for (std::int64_t v : multiplicity) {
      if (v < 0) throw InvariantError("edge multiplicities must be nonnegative");
    }
  }

  std::int64_t& at(int s, int r) { return multiplicity[static_cast<std::size_t>(s) * receivers + r]; }
  std::int64_t at(int s, int r) const { return multiplicity[static_cast<std::size_t>(s) * receivers + r]; }

  std::int64_t total() const {
    std::int64_t t = 0;
    for (std::int64_t v : multiplicity) t += v;
    return t;
  }

  void add(const MultiEdgeSet& other) {
    if (senders != other.senders || receivers != other.receivers) {
      throw InvariantError("multi-edge set dimension mismatch");
    }
    for (std::size_t i = 0; i < multiplicity.size(); ++i) multiplicity[i] += other.multiplicity[i];
  }

  // Removes one copy of every edge of the matching; the matching must be
  // contained in the support.
  void remove(const Matching& m) {
    for (const Edge& e : m.edges()) {
      std::int64_t& v = at(e.sender, e.receiver);
      if (v <= 0) throw InvariantError("removing a matching edge absent from the multigraph");
      --v;
    }
  }
};

namespace detail {

// Exact square assignment, minimization, potential-based O(k^3). Works over
// any ordered exact scalar; "infinity" is replaced by explicit emptiness
// flags. Returns row assigned to each column.
template <typename S>
std::vector<int> solve_assignment_min(const std::vector<std::vector<S>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<S> u(static_cast<std::size_t>(n), S(0));
  std::vector<S> v(static_cast<std::size_t>(n) + 1, S(0));
  std::vector<int> match(static_cast<std::size_t>(n) + 1, -1);  // match[j] = row in column j; n is virtual
  std::vector<int> way(static_cast<std::size_t>(n), 0);

  for (int i = 0; i < n; ++i) {
    match[n] = i;
    int j0 = n;
    std::vector<S> minv(static_cast<std::size_t>(n), S(0));
    std::vector<char> have(static_cast<std::size_t>(n), 0);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = -1;
      S delta(0);
      bool have_delta = false;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        S cur = a[i0][j] - u[i0] - v[j];
        if (!have[j] || cur < minv[j]) {
          minv[j] = cur;
          have[j] = 1;
          way[j] = j0;
        }
        if (!have_delta || minv[j] < delta) {
          delta = minv[j];
          have_delta = true;
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else if (j < n && have[j]) {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != -1);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != n);
  }
  match.pop_back();
  return match;
}

// Maximum total weight over matchings restricted to free rows/columns and to
// edges lexicographically greater than `floor_edge`. Zero-weight edges never
// contribute, so "forbidden" edges are simply weighted zero.
template <typename S>
S restricted_max_total(const WeightMatrix<S>& w, const std::vector<char>& row_free,
                       const std::vector<char>& col_free, const Edge& floor_edge) {
  std::vector<int> rows, cols;
  for (int i = 0; i < w.senders(); ++i) {
    if (row_free[i]) rows.push_back(i);
  }
  for (int j = 0; j < w.receivers(); ++j) {
    if (col_free[j]) cols.push_back(j);
  }
  const int k = static_cast<int>(std::max(rows.size(), cols.size()));
  if (k == 0) return S(0);
  std::vector<std::vector<S>> cost(k, std::vector<S>(k, S(0)));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const Edge e{rows[a], cols[b]};
      if (floor_edge < e) cost[a][b] = S(0) - w(rows[a], cols[b]);
    }
  }
  std::vector<int> match = solve_assignment_min(cost);
  S total(0);
  for (int j = 0; j < k; ++j) {
    if (match[j] >= 0) total -= cost[match[j]][j];
  }
  return total;
}

}  // namespace detail

template <typename S>
struct MatchingResult {
  Matching matching;
  S weight{};
};

// Maximum-weight matching over nonnegative weights. Among the optimal
// matchings the lexicographically smallest edge set is returned, and
// zero-weight edges are excluded; both make outputs reproducible without
// changing the objective.
template <typename S>
MatchingResult<S> max_weight_matching(const WeightMatrix<S>& weights) {
  const int n = weights.senders();
  const int m = weights.receivers();
  std::vector<char> row_free(static_cast<std::size_t>(n), 1);
  std::vector<char> col_free(static_cast<std::size_t>(m), 1);
  const Edge before_all{-1, -1};
  const S best = detail::restricted_max_total(weights, row_free, col_free, before_all);

  MatchingResult<S> result;
  result.weight = best;
  std::vector<Edge> chosen;
  S fixed(0);
  Edge last = before_all;
  while (fixed != best) {
    bool advanced = false;
    for (int i = 0; i < n && !advanced; ++i) {
      if (!row_free[i]) continue;
      for (int j = 0; j < m && !advanced; ++j) {
        if (!col_free[j]) continue;
        const Edge e{i, j};
        if (!(last < e) || weights(i, j) == S(0)) continue;
        row_free[i] = 0;
        col_free[j] = 0;
        const S rest = detail::restricted_max_total(weights, row_free, col_free, e);
        if (fixed + weights(i, j) + rest == best) {
          chosen.push_back(e);
          fixed += weights(i, j);
          last = e;
          advanced = true;
        } else {
          row_free[i] = 1;
          col_free[j] = 1;
        }
      }
    }
    if (!advanced) throw InvariantError("max_weight_matching failed to reconstruct an optimal matching");
  }
  result.matching = Matching::of(std::move(chosen));
  return result;
}

// Maximum-cardinality matching among edges with multiplicity >= 1; ties go to
// the lexicographically smallest edge set.
inline Matching max_cardinality_matching(const MultiEdgeSet& edges) {
  WeightMatrix<std::int64_t> w(edges.senders, edges.receivers);
  for (int s = 0; s < edges.senders; ++s) {
    for (int r = 0; r < edges.receivers; ++r) {
      if (edges.at(s, r) >= 1) w(s, r) = 1;
    }
  }
  return max_weight_matching(w).matching;
}

// All matchings of the complete bipartite graph, the empty one included.
// 7 for 2x2, 34 for 3x3, 1546 for 5x5.
inline std::vector<Matching> enumerate_matchings(int senders, int receivers) {
  std::vector<Matching> out;
  std::vector<Edge> current;
  std::vector<char> receiver_used(static_cast<std::size_t>(receivers), 0);
  auto recurse = [&](auto&& self, int sender) -> void {
    if (sender == senders) {
      out.push_back(Matching::of(current));
      return;
    }
    self(self, sender + 1);  // sender stays unmatched
    for (int r = 0; r < receivers; ++r) {
      if (receiver_used[r]) continue;
      receiver_used[r] = 1;
      current.push_back(Edge{sender, r});
      self(self, sender + 1);
      current.pop_back();
      receiver_used[r] = 0;
    }
  };
  recurse(recurse, 0);
  return out;
}

}  // namespace csched

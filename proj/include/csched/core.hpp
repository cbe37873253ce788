#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "csched/errors.hpp"
#include "csched/rational.hpp"

namespace csched {

// Scalar is either Rat (exact pipeline, the default everywhere user data
// flows) or std::int64_t (hot paths of the exhaustive certificate suites,
// valid whenever the instance is integral). All algorithms compare ratios by
// cross-multiplication, so both instantiations are exact.

template <typename S>
class DemandMatrix {
 public:
  DemandMatrix() : senders_(0), receivers_(0) {}

  DemandMatrix(int senders, int receivers)
      : senders_(senders), receivers_(receivers),
        cells_(static_cast<std::size_t>(senders) * receivers, S(0)) {
    if (senders < 0 || receivers < 0) throw InvariantError("matrix dimensions must be nonnegative");
  }

  DemandMatrix(int senders, int receivers, std::vector<S> cells)
      : senders_(senders), receivers_(receivers), cells_(std::move(cells)) {
    if (senders < 0 || receivers < 0) throw InvariantError("matrix dimensions must be nonnegative");
    if (cells_.size() != static_cast<std::size_t>(senders) * receivers) {
      throw InvariantError("matrix cell count does not match dimensions");
    }
    for (const S& v : cells_) {
      if (v < S(0)) throw InvariantError("demand entries must be nonnegative");
    }
  }

  int senders() const { return senders_; }
  int receivers() const { return receivers_; }

  const S& operator()(int s, int r) const { return cells_[static_cast<std::size_t>(s) * receivers_ + r]; }
  S& operator()(int s, int r) { return cells_[static_cast<std::size_t>(s) * receivers_ + r]; }

  const std::vector<S>& cells() const { return cells_; }

  S total() const {
    S sum(0);
    for (const S& v : cells_) sum += v;
    return sum;
  }

  bool is_zero() const {
    for (const S& v : cells_) {
      if (v != S(0)) return false;
    }
    return true;
  }

  bool same_shape(const DemandMatrix& other) const {
    return senders_ == other.senders_ && receivers_ == other.receivers_;
  }

  bool operator==(const DemandMatrix& other) const = default;

 private:
  int senders_;
  int receivers_;
  std::vector<S> cells_;  // row-major
};

struct Edge {
  int sender = 0;
  int receiver = 0;
  auto operator<=>(const Edge&) const = default;
};

// A set of sender-receiver pairs with no shared endpoint. Edges are kept
// sorted, so equal matchings compare equal and the lexicographic order on
// edge lists is the tie-break order used by the matching kernels.
class Matching {
 public:
  Matching() = default;

  static Matching of(std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end());
    Matching m;
    m.edges_ = std::move(edges);
    m.validate();
    return m;
  }

  const std::vector<Edge>& edges() const { return edges_; }
  int size() const { return static_cast<int>(edges_.size()); }
  bool empty() const { return edges_.empty(); }

  bool fits(int senders, int receivers) const {
    for (const Edge& e : edges_) {
      if (e.sender < 0 || e.sender >= senders || e.receiver < 0 || e.receiver >= receivers) return false;
    }
    return true;
  }

  auto operator<=>(const Matching& other) const { return edges_ <=> other.edges_; }
  bool operator==(const Matching& other) const = default;

 private:
  void validate() const {
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
      if (edges_[i].sender == edges_[i + 1].sender) {
        throw InvariantError("matching reuses sender " + std::to_string(edges_[i].sender));
      }
    }
    std::vector<int> receivers;
    receivers.reserve(edges_.size());
    for (const Edge& e : edges_) {
      if (e.sender < 0 || e.receiver < 0) throw InvariantError("matching edge indices must be nonnegative");
      receivers.push_back(e.receiver);
    }
    std::sort(receivers.begin(), receivers.end());
    if (std::adjacent_find(receivers.begin(), receivers.end()) != receivers.end()) {
      throw InvariantError("matching reuses a receiver");
    }
  }

  std::vector<Edge> edges_;
};

// Transmit along `matching` for `alpha` time units.
template <typename S>
struct Configuration {
  Matching matching;
  S alpha{};

  Configuration() = default;
  Configuration(Matching m, S a) : matching(std::move(m)), alpha(std::move(a)) {
    if (alpha < S(0)) throw InvariantError("configuration duration must be nonnegative");
  }

  bool operator==(const Configuration&) const = default;
};

// Ordered list of configurations plus the window bookkeeping. The objective
// treats the list as a multiset; order only matters to truncation.
template <typename S>
struct Schedule {
  std::vector<Configuration<S>> configs;
  S delta{};
  S window{};

  S time_used() const {
    S t(0);
    for (const auto& c : configs) t += c.alpha + delta;
    return t;
  }
};

template <typename S>
struct Instance {
  DemandMatrix<S> demand;
  S delta{};
  S window{};

  Instance() = default;
  Instance(DemandMatrix<S> d, S dl, S w)
      : demand(std::move(d)), delta(std::move(dl)), window(std::move(w)) {
    if (delta < S(0)) throw InvariantError("delta must be nonnegative");
    if (window < S(0)) throw InvariantError("window must be nonnegative");
  }
};

namespace detail {

template <typename S>
void require_fits(const Matching& m, const DemandMatrix<S>& demand) {
  if (!m.fits(demand.senders(), demand.receivers())) {
    throw InvariantError("matching does not fit the demand matrix dimensions");
  }
}

// Per-edge scheduled time: sum of alpha over configurations containing the edge.
template <typename S>
DemandMatrix<S> coverage(const Schedule<S>& sched, const DemandMatrix<S>& demand) {
  DemandMatrix<S> cov(demand.senders(), demand.receivers());
  for (const auto& config : sched.configs) {
    require_fits(config.matching, demand);
    for (const Edge& e : config.matching.edges()) cov(e.sender, e.receiver) += config.alpha;
  }
  return cov;
}

}  // namespace detail

// Total satisfied demand: sum over edges of min(D_e, scheduled time on e).
template <typename S>
S evaluate_throughput(const Schedule<S>& sched, const DemandMatrix<S>& demand) {
  DemandMatrix<S> cov = detail::coverage(sched, demand);
  S total(0);
  for (int s = 0; s < demand.senders(); ++s) {
    for (int r = 0; r < demand.receivers(); ++r) {
      total += std::min(demand(s, r), cov(s, r));
    }
  }
  return total;
}

// Entrywise D - min(D, sum alpha M); what is still left to send.
template <typename S>
DemandMatrix<S> residual(const DemandMatrix<S>& demand, const Schedule<S>& sched) {
  DemandMatrix<S> cov = detail::coverage(sched, demand);
  DemandMatrix<S> out(demand.senders(), demand.receivers());
  for (int s = 0; s < demand.senders(); ++s) {
    for (int r = 0; r < demand.receivers(); ++r) {
      out(s, r) = demand(s, r) - std::min(demand(s, r), cov(s, r));
    }
  }
  return out;
}

template <typename S>
bool is_feasible(const Schedule<S>& sched) {
  return sched.time_used() <= sched.window;
}

namespace detail {

// f of the schedule with config `skip` removed and config `shorten` (if any)
// trimmed to `new_alpha`. Avoids materializing candidate schedules.
template <typename S>
S throughput_with_edit(const Schedule<S>& sched, const DemandMatrix<S>& demand,
                       int skip, int shorten, const S& new_alpha) {
  DemandMatrix<S> cov(demand.senders(), demand.receivers());
  for (int i = 0; i < static_cast<int>(sched.configs.size()); ++i) {
    if (i == skip) continue;
    const S& a = (i == shorten) ? new_alpha : sched.configs[i].alpha;
    for (const Edge& e : sched.configs[i].matching.edges()) cov(e.sender, e.receiver) += a;
  }
  S total(0);
  for (int s = 0; s < demand.senders(); ++s) {
    for (int r = 0; r < demand.receivers(); ++r) {
      total += std::min(demand(s, r), cov(s, r));
    }
  }
  return total;
}

}  // namespace detail

// Turns a schedule feasible for window W into one feasible for W - delta while
// keeping at least a (1 - 2*delta/W) fraction of the throughput. Candidate
// moves: trim delta from one configuration (dropping it if its duration does
// not exceed delta), delete one configuration, or rescale every duration by
// (W - delta - q*delta)/T_data. Trimming certifies the ratio when T_data >=
// W/2, deletion when q >= W/(2*delta), rescaling in the remaining gap, so the
// best of the three always meets the bound. Already-fitting schedules are
// returned unchanged.
inline Schedule<Rat> shrink_schedule(const Schedule<Rat>& sched, const DemandMatrix<Rat>& demand) {
  const Rat& delta = sched.delta;
  const Rat& window = sched.window;
  if (delta == 0) return sched;
  if (window <= 2 * delta) {
    throw InvariantError("shrink guarantee not applicable: window <= 2*delta");
  }
  if (!is_feasible(sched)) throw InvariantError("shrink_schedule requires a feasible input schedule");

  Schedule<Rat> out = sched;
  out.window = window - delta;
  if (sched.time_used() <= out.window) return out;

  const int q = static_cast<int>(sched.configs.size());
  Rat data_time(0);
  for (const auto& c : sched.configs) data_time += c.alpha;

  struct Move {
    Rat value;
    int kind;  // 0 = trim, 1 = delete, 2 = rescale
    int index;
  };
  std::vector<Move> moves;
  for (int i = 0; i < q; ++i) {
    const Rat& alpha = sched.configs[i].alpha;
    if (alpha > delta) {
      moves.push_back({detail::throughput_with_edit(sched, demand, -1, i, Rat(alpha - delta)), 0, i});
    } else {
      moves.push_back({detail::throughput_with_edit(sched, demand, i, -1, Rat(0)), 0, i});
    }
  }
  for (int i = 0; i < q; ++i) {
    moves.push_back({detail::throughput_with_edit(sched, demand, i, -1, Rat(0)), 1, i});
  }
  Rat scale(0);
  bool have_scale = false;
  if (data_time > 0) {
    Rat budget = window - delta - Rat(q) * delta;
    if (budget > 0) {
      scale = budget / data_time;  // < 1 here: time_used > window - delta
      Schedule<Rat> scaled = sched;
      for (auto& c : scaled.configs) c.alpha *= scale;
      moves.push_back({evaluate_throughput(scaled, demand), 2, 0});
      have_scale = true;
    }
  }

  const Move* best = &moves.front();
  for (const Move& m : moves) {
    if (m.value > best->value) best = &m;
  }

  out.configs.clear();
  switch (best->kind) {
    case 0:
      for (int i = 0; i < q; ++i) {
        Rat alpha = sched.configs[i].alpha;
        if (i == best->index) {
          if (alpha <= delta) continue;  // trimming past zero removes it
          alpha -= delta;
        }
        out.configs.emplace_back(sched.configs[i].matching, alpha);
      }
      break;
    case 1:
      for (int i = 0; i < q; ++i) {
        if (i == best->index) continue;
        out.configs.push_back(sched.configs[i]);
      }
      break;
    default:
      (void)have_scale;
      for (const auto& c : sched.configs) out.configs.emplace_back(c.matching, Rat(c.alpha * scale));
      break;
  }
  return out;
}

}  // namespace csched

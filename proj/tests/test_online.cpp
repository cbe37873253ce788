#include "csched/online.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "csched/greedy.hpp"
#include "csched/hybrid.hpp"
#include "csched/oracle.hpp"
#include "csched/rng.hpp"
#include "support/test_oracles.hpp"

using namespace csched;

namespace {

Trace<std::int64_t> make_trace(int n, int m, std::vector<std::vector<std::int64_t>> steps) {
  Trace<std::int64_t> t;
  t.senders = n;
  t.receivers = m;
  for (auto& cells : steps) t.steps.emplace_back(n, m, std::move(cells));
  return t;
}

OfflineSolver<std::int64_t> oracle_handle() {
  return [](const DemandMatrix<std::int64_t>& demand, const std::int64_t& delta,
            const std::int64_t& window, RngStream) {
    return optimal_schedule_integer(Instance<std::int64_t>(demand, delta, window)).schedule;
  };
}

std::vector<MultiEdgeSet> to_multisets(const Trace<std::int64_t>& t) {
  std::vector<MultiEdgeSet> out;
  for (const auto& step : t.steps) {
    MultiEdgeSet s(t.senders, t.receivers);
    for (int i = 0; i < t.senders; ++i) {
      for (int j = 0; j < t.receivers; ++j) s.at(i, j) = step(i, j);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("no-delay greedy clears simple traces optimally") {
  auto burst = make_trace(2, 2, {{1, 0, 0, 1}, {0, 0, 0, 0}});
  OnlineRun<std::int64_t> run = online_no_delay(burst);
  CHECK(run.total_sent == 2);
  CHECK(run.actions[0].action == StepAction::kSend);
  CHECK(run.actions[1].action == StepAction::kIdle);

  auto spread = make_trace(2, 2, {{1, 0, 0, 0}, {0, 0, 0, 1}});
  CHECK(online_no_delay(spread).total_sent == 2);
}

TEST_CASE("no-delay greedy rejects fractional traces") {
  Trace<Rat> t;
  t.senders = t.receivers = 1;
  t.steps.emplace_back(1, 1, std::vector<Rat>{Rat(1, 2)});
  CHECK_THROWS_AS(online_no_delay(t), InvariantError);
}

TEST_CASE("a tie at step one can cost the greedy, but never half") {
  // arrivals {(0,0),(0,1)} then {(1,1)}: greedy holds 2, the optimum 3
  auto t = make_trace(2, 2, {{1, 1, 0, 0}, {0, 0, 0, 1}});
  OnlineRun<std::int64_t> run = online_no_delay(t);
  OnlineOracleResult opt = optimal_online_no_delay(to_multisets(t));
  CHECK(run.total_sent == 2);
  CHECK(opt.total == 3);
  CHECK(2 * run.total_sent >= opt.total);
}

TEST_CASE("no-delay greedy keeps half the optimum on random tiny traces") {
  RngStream stream(79, "online-half");
  for (int iter = 0; iter < 150; ++iter) {
    RngStream it = stream.child(iter);
    Trace<std::int64_t> t;
    t.senders = t.receivers = 2;
    const int horizon = static_cast<int>(it.next_in(1, 3));
    for (int step = 0; step < horizon; ++step) {
      std::vector<std::int64_t> cells(4, 0);
      const int edges = static_cast<int>(it.next_in(0, 2));
      for (int e = 0; e < edges; ++e) cells[static_cast<std::size_t>(it.next_in(0, 3))] += 1;
      t.steps.emplace_back(2, 2, std::move(cells));
    }
    OnlineRun<std::int64_t> run = online_no_delay(t);
    OnlineOracleResult opt = optimal_online_no_delay(to_multisets(t));
    CHECK(2 * run.total_sent >= opt.total);
    CHECK(run.total_sent <= opt.total);
  }
}

TEST_CASE("first-step exchange never costs the optimum more than the matching") {
  RngStream stream(83, "online-exchange");
  for (int iter = 0; iter < 60; ++iter) {
    RngStream it = stream.child(iter);
    Trace<std::int64_t> t;
    t.senders = t.receivers = 2;
    const int horizon = static_cast<int>(it.next_in(2, 3));
    for (int step = 0; step < horizon; ++step) {
      std::vector<std::int64_t> cells(4, 0);
      // keep the merged first step within the online oracle's size guard
      const int edges = static_cast<int>(it.next_in(0, step == 0 ? 2 : 1));
      for (int e = 0; e < edges; ++e) cells[static_cast<std::size_t>(it.next_in(0, 3))] += 1;
      t.steps.emplace_back(2, 2, std::move(cells));
    }
    std::vector<MultiEdgeSet> steps = to_multisets(t);

    std::vector<MultiEdgeSet> rest(steps.begin() + 1, steps.end());
    const std::int64_t opt_rest = optimal_online_no_delay(rest).total;

    for (const Matching& m1 : enumerate_matchings(2, 2)) {
      bool inside = true;
      for (const Edge& e : m1.edges()) {
        if (steps[0].at(e.sender, e.receiver) < 1) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      MultiEdgeSet merged = steps[0];
      merged.remove(m1);
      merged.add(steps[1]);
      std::vector<MultiEdgeSet> modified(steps.begin() + 1, steps.end());
      modified[0] = merged;
      CHECK(optimal_online_no_delay(modified).total >= opt_rest - m1.size());
    }
  }
}

TEST_CASE("blocked reduction on an all-zero trace sends nothing") {
  auto t = make_trace(2, 2, std::vector<std::vector<std::int64_t>>(6, {0, 0, 0, 0}));
  OnlineRun<std::int64_t> run = online_blocked(t, std::int64_t{1}, 3, oracle_handle(), 5);
  CHECK(run.total_sent == 0);
  CHECK(run.blocks.size() == 2);
  for (const auto& step : run.actions) CHECK(step.action != StepAction::kSend);
}

TEST_CASE("a single-block trace reduces to one offline call") {
  auto t = make_trace(2, 2, {{2, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 0, 0}});
  OnlineRun<std::int64_t> run = online_blocked(t, std::int64_t{1}, 3, oracle_handle(), 5);
  DemandMatrix<std::int64_t> aggregate(2, 2, {2, 1, 0, 1});
  const std::int64_t direct =
      optimal_schedule_integer(Instance<std::int64_t>(aggregate, 1, 3)).value;
  CHECK(run.total_sent == direct);
  CHECK(run.blocks.size() == 1);
  CHECK(run.actions.size() == 6);  // one waiting block plus the extension
}

TEST_CASE("blocked reduction validates its inputs and its handle") {
  auto t = make_trace(2, 2, {{1, 0, 0, 1}});
  CHECK_THROWS_AS(online_blocked(t, std::int64_t{1}, 2, oracle_handle(), 5), InvariantError);
  CHECK_THROWS_AS(online_blocked(t, std::int64_t{0}, 3, oracle_handle(), 5), InvariantError);

  OfflineSolver<std::int64_t> overlong = [](const DemandMatrix<std::int64_t>&, const std::int64_t& delta,
                                            const std::int64_t& window, RngStream) {
    Schedule<std::int64_t> s;
    s.delta = delta;
    s.window = window;
    s.configs.emplace_back(Matching::of({{0, 0}}), window);  // alpha + delta > window
    return s;
  };
  CHECK_THROWS_AS(online_blocked(t, std::int64_t{1}, 3, overlong, 5), InvariantError);
}

TEST_CASE("blocked runs account every step") {
  RngStream gen(89, "online-accounting");
  Trace<std::int64_t> t;
  t.senders = t.receivers = 2;
  for (int step = 0; step < 9; ++step) {
    std::vector<std::int64_t> cells(4);
    for (auto& c : cells) c = gen.next_in(0, 2);
    t.steps.emplace_back(2, 2, std::move(cells));
  }
  OnlineRun<std::int64_t> run = online_blocked(t, std::int64_t{1}, 3, oracle_handle(), 7);
  CHECK(run.actions.size() == 12);  // ceil(9/3)=3 blocks plus the extension
  int sends = 0, switches = 0, idles = 0;
  for (const auto& step : run.actions) {
    switch (step.action) {
      case StepAction::kSend: ++sends; break;
      case StepAction::kSwitch: ++switches; break;
      case StepAction::kIdle: ++idles; break;
    }
  }
  CHECK(sends + switches + idles == 12);
  int configs = 0;
  for (const auto& block : run.blocks) configs += static_cast<int>(block.configs.size());
  CHECK(switches == configs);  // delta = 1: one switch step per configuration

  OnlineRun<std::int64_t> again = online_blocked(t, std::int64_t{1}, 3, oracle_handle(), 7);
  CHECK(again.total_sent == run.total_sent);
}

TEST_CASE("adversarial trace construction") {
  RngStream stream(97, "adversary");
  Trace<std::int64_t> t = adversarial_trace<std::int64_t>(2, 1, 2, stream.child(0));
  REQUIRE(t.steps.size() == 2);
  CHECK(t.steps[0].is_zero());
  std::int64_t arrived = t.steps[1].total();
  CHECK(arrived == 2);  // a perfect matching of unit demands

  CHECK_THROWS_AS(adversarial_trace<std::int64_t>(2, 3, 3, stream.child(1)), InvariantError);
}

TEST_CASE("the blocked extension catches a last-step arrival") {
  RngStream stream(101, "adversary-blocked");
  for (int n = 2; n <= 3; ++n) {
    Trace<std::int64_t> t = adversarial_trace<std::int64_t>(n, 1, 6, stream.child(n));
    OnlineRun<std::int64_t> run = online_blocked(t, std::int64_t{1}, 3, oracle_handle(), 3);
    CHECK(run.total_sent == n);  // everything, thanks to the post-horizon block
  }
}

TEST_CASE("snapping to whole steps floors durations and drops empties") {
  Schedule<Rat> s;
  s.delta = Rat(1);
  s.window = Rat(4);
  s.configs.emplace_back(Matching::of({{0, 0}}), Rat(5, 2));
  s.configs.emplace_back(Matching::of({{1, 1}}), Rat(1, 2));
  Schedule<Rat> snapped = snap_schedule_to_whole_steps(s);
  REQUIRE(snapped.configs.size() == 1);
  CHECK(snapped.configs[0].alpha == Rat(2));
}

TEST_CASE("blocked with the hybrid handle keeps the composed share on spread traces") {
  // hybrid as the offline box at epsilon' = 1/10 and k = 4; asserted only as
  // a lower bound, with 387/1000 standing in for (e-1)/(2e-1) and a slack of
  // 1/4 on top: total >= (387/1000 - 1/4) * offline optimum of the aggregate
  const Rat epsilon_prime(1, 10);
  OfflineSolver<Rat> hybrid_handle = [epsilon_prime](const DemandMatrix<Rat>& d, const Rat& delta,
                                                     const Rat& window, RngStream stream) {
    return snap_schedule_to_whole_steps(
        hybrid_schedule(Instance<Rat>(d, delta, window), epsilon_prime, stream.next_u64()));
  };
  RngStream stream(107, "online-composed");
  for (int iter = 0; iter < 5; ++iter) {
    RngStream it = stream.child(iter);
    Trace<Rat> trace;
    trace.senders = trace.receivers = 2;
    DemandMatrix<std::int64_t> aggregate(2, 2);
    const int horizon = 8;
    for (int t = 0; t < horizon; ++t) {
      DemandMatrix<Rat> step(2, 2);
      for (int s = 0; s < 2; ++s) {
        for (int r = 0; r < 2; ++r) {
          if (it.next_in(1, 100) <= 60) {
            const std::int64_t units = it.next_in(1, 2);
            step(s, r) = Rat(units);
            aggregate(s, r) += units;
          }
        }
      }
      trace.steps.push_back(std::move(step));
    }
    OnlineRun<Rat> run = online_blocked(trace, Rat(1), 4, hybrid_handle, 23);
    const std::int64_t opt =
        optimal_schedule_integer(Instance<std::int64_t>(aggregate, 1, horizon)).value;
    CHECK(run.total_sent * 1000 >= Rat(opt) * 137);
  }
}

#include "csched/oracle.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "csched/greedy.hpp"
#include "csched/rng.hpp"
#include "support/test_oracles.hpp"

using namespace csched;

TEST_CASE("oracle solves the worked 2x2 instance") {
  Instance<std::int64_t> inst(DemandMatrix<std::int64_t>(2, 2, {3, 0, 0, 2}), 1, 5);
  OracleResult<std::int64_t> got = optimal_schedule_integer(inst);
  CHECK(got.value == 5);
  CHECK(is_feasible(got.schedule));
  CHECK(evaluate_throughput(got.schedule, inst.demand) == 5);
}

TEST_CASE("oracle returns zero when no configuration fits") {
  Instance<std::int64_t> inst(DemandMatrix<std::int64_t>(1, 1, {4}), 3, 3);  // W < delta + 1
  CHECK(optimal_schedule_integer(inst).value == 0);
}

TEST_CASE("oracle saturates demand with zero delay and a wide window") {
  Instance<std::int64_t> inst(DemandMatrix<std::int64_t>(2, 2, {2, 1, 1, 2}), 0, 12);
  CHECK(optimal_schedule_integer(inst).value == 6);
}

TEST_CASE("oracle agrees with the order-enumerating search") {
  RngStream stream(47, "oracle-cross");
  for (int iter = 0; iter < 40; ++iter) {
    RngStream it = stream.child(iter);
    const int n = static_cast<int>(it.next_in(1, 2));
    const int m = static_cast<int>(it.next_in(1, 2));
    std::vector<std::int64_t> cells;
    for (int i = 0; i < n * m; ++i) cells.push_back(it.next_in(0, 3));
    const std::int64_t delta = it.next_in(0, 2);
    const std::int64_t window = it.next_in(0, 6);
    DemandMatrix<std::int64_t> demand(n, m, cells);
    Instance<std::int64_t> inst(demand, delta, window);
    CHECK(optimal_schedule_integer(inst).value ==
          testing::ordered_schedule_search(demand, delta, window));
  }
}

TEST_CASE("oracle value is monotone in the window and the config budget") {
  RngStream stream(53, "oracle-monotone");
  for (int iter = 0; iter < 30; ++iter) {
    RngStream it = stream.child(iter);
    std::vector<std::int64_t> cells;
    for (int i = 0; i < 9; ++i) cells.push_back(it.next_in(0, 3));
    DemandMatrix<std::int64_t> demand(3, 3, cells);
    const std::int64_t delta = it.next_in(0, 2);

    std::int64_t prev = -1;
    for (std::int64_t window = 0; window <= 7; ++window) {
      const std::int64_t v = optimal_schedule_integer(Instance<std::int64_t>(demand, delta, window)).value;
      CHECK(v >= prev);
      prev = v;
    }
    prev = -1;
    for (int k = 0; k <= 4; ++k) {
      const std::int64_t v =
          optimal_schedule_integer(Instance<std::int64_t>(demand, delta, 7), k).value;
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("oracle refuses oversized inputs") {
  Instance<std::int64_t> wide(DemandMatrix<std::int64_t>(4, 3), 1, 5);
  CHECK_THROWS_AS(optimal_schedule_integer(wide), BudgetError);
  Instance<std::int64_t> longwin(DemandMatrix<std::int64_t>(2, 2), 1, 13);
  CHECK_THROWS_AS(optimal_schedule_integer(longwin), BudgetError);
  Instance<Rat> fractional(DemandMatrix<Rat>(1, 1, {Rat(1, 2)}), Rat(1), Rat(3));
  CHECK_THROWS_AS(optimal_schedule_integer(fractional), BudgetError);
}

TEST_CASE("greedy never exceeds the oracle on integral instances") {
  // greedy durations stay integral when the instance is integral, so its
  // value is bounded by the exhaustive integer optimum
  RngStream stream(59, "oracle-dominates");
  for (int iter = 0; iter < 60; ++iter) {
    RngStream it = stream.child(iter);
    const int n = static_cast<int>(it.next_in(1, 3));
    const int m = static_cast<int>(it.next_in(1, 3));
    std::vector<std::int64_t> cells;
    for (int i = 0; i < n * m; ++i) cells.push_back(it.next_in(0, 4));
    Instance<std::int64_t> inst(DemandMatrix<std::int64_t>(n, m, std::move(cells)),
                                it.next_in(0, 2), it.next_in(0, 9));
    const std::int64_t greedy_f = evaluate_throughput(greedy_schedule(inst), inst.demand);
    CHECK(greedy_f <= optimal_schedule_integer(inst).value);
  }
}

TEST_CASE("oracle is deterministic") {
  Instance<std::int64_t> inst(DemandMatrix<std::int64_t>(3, 3, {1, 2, 0, 2, 1, 1, 0, 3, 2}), 1, 7);
  OracleResult<std::int64_t> a = optimal_schedule_integer(inst);
  OracleResult<std::int64_t> b = optimal_schedule_integer(inst);
  CHECK(a.value == b.value);
  CHECK(a.schedule.configs == b.schedule.configs);
}

TEST_CASE("online oracle handles single steps and tiny traces") {
  MultiEdgeSet single(2, 2, {1, 0, 0, 1});
  OnlineOracleResult one = optimal_online_no_delay({single});
  CHECK(one.total == 2);

  // greedy-friendly trace: optimum equals sending everything as it arrives
  MultiEdgeSet a(2, 2, {1, 0, 0, 0});
  MultiEdgeSet b(2, 2, {0, 0, 0, 1});
  CHECK(optimal_online_no_delay({a, b}).total == 2);
}

TEST_CASE("online oracle size guards") {
  std::vector<MultiEdgeSet> steps(5, MultiEdgeSet(2, 2));
  CHECK_THROWS_AS(optimal_online_no_delay(steps), BudgetError);
  MultiEdgeSet fat(2, 2, {2, 2, 0, 0});
  CHECK_THROWS_AS(optimal_online_no_delay({fat}), BudgetError);
}

#include "csched/hybrid.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "csched/oracle.hpp"
#include "csched/rng.hpp"
#include "support/test_oracles.hpp"

using namespace csched;

namespace {

bool same_schedule(const Schedule<Rat>& a, const Schedule<Rat>& b) {
  return a.configs == b.configs;
}

}  // namespace

TEST_CASE("zero delay always dispatches to greedy") {
  Instance<Rat> inst(DemandMatrix<Rat>(2, 2, {Rat(3), Rat(1), Rat(0), Rat(2)}), Rat(0), Rat(6));
  CHECK(same_schedule(hybrid_schedule(inst, Rat(1, 10), 3), greedy_schedule(inst)));
}

TEST_CASE("large delay dispatches to the LP with k = floor(W/delta)") {
  // delta = W/2: threshold ~0.0791*W < delta, so the LP branch runs with k = 2
  Instance<Rat> inst(DemandMatrix<Rat>(2, 2, {Rat(3), Rat(0), Rat(0), Rat(2)}), Rat(4), Rat(8));
  Schedule<Rat> got = hybrid_schedule(inst, Rat(1, 10), 11);
  CHECK(same_schedule(got, lp_schedule(inst, 2, Rat(1, 10), 11)));
}

TEST_CASE("the dispatch boundary itself stays greedy") {
  const Rat epsilon(1, 2);
  const Rat window(1000);
  const Rat boundary = greedy_dispatch_coefficient() * epsilon * window;
  Instance<Rat> at(DemandMatrix<Rat>(1, 1, {Rat(5)}), boundary, window);
  CHECK(same_schedule(hybrid_schedule(at, epsilon, 1), greedy_schedule(at)));

  Instance<Rat> above(DemandMatrix<Rat>(1, 1, {Rat(5)}), boundary + Rat(1, 1000), window);
  const Int k = rat_floor(above.window / above.delta);
  CHECK(same_schedule(hybrid_schedule(above, epsilon, 1),
                      lp_schedule(above, k.convert_to<int>(), epsilon, 1)));
}

TEST_CASE("hybrid validates epsilon and the empty window") {
  Instance<Rat> inst(DemandMatrix<Rat>(1, 1, {Rat(1)}), Rat(1), Rat(3));
  CHECK_THROWS_AS(hybrid_schedule(inst, Rat(7, 10), 1), InvariantError);  // >= 1 - 1/e
  CHECK_THROWS_AS(hybrid_schedule(inst, Rat(0), 1), InvariantError);

  Instance<Rat> nothing(DemandMatrix<Rat>(1, 1, {Rat(1)}), Rat(1), Rat(0));
  CHECK(hybrid_schedule(nothing, Rat(1, 5), 1).configs.empty());
}

TEST_CASE("hybrid keeps the approximation share on a desk sample") {
  RngStream stream(73, "hybrid-endtoend");
  for (int iter = 0; iter < 20; ++iter) {
    RngStream it = stream.child(iter);
    const int n = static_cast<int>(it.next_in(1, 2));
    const int m = static_cast<int>(it.next_in(1, 2));
    std::vector<std::int64_t> cells;
    for (int i = 0; i < n * m; ++i) cells.push_back(it.next_in(0, 3));
    const std::int64_t delta = it.next_in(0, 2);
    const std::int64_t window = it.next_in(1, 8);

    std::vector<Rat> rat_cells(cells.begin(), cells.end());
    Instance<Rat> inst(DemandMatrix<Rat>(n, m, rat_cells), Rat(delta), Rat(window));
    Schedule<Rat> s = hybrid_schedule(inst, Rat(1, 5), 7);
    CHECK(is_feasible(s));

    Instance<std::int64_t> fast(DemandMatrix<std::int64_t>(n, m, cells), delta, window);
    const std::int64_t opt = optimal_schedule_integer(fast).value;
    // (1 - 1/e - 1/5), lower-bounded by 432/1000
    CHECK(evaluate_throughput(s, inst.demand) * 1000 >= Rat(opt) * 432);
  }
}

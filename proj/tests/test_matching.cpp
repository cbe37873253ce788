#include "csched/matching.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "csched/rng.hpp"
#include "support/test_oracles.hpp"

using namespace csched;

TEST_CASE("matching validation") {
  CHECK_THROWS_AS(Matching::of({{0, 0}, {0, 1}}), InvariantError);
  CHECK_THROWS_AS(Matching::of({{0, 1}, {1, 1}}), InvariantError);
  CHECK_THROWS_AS(Matching::of({{-1, 0}}), InvariantError);
  CHECK(Matching::of({{1, 0}, {0, 1}}).edges()[0] == Edge{0, 1});  // kept sorted
}

TEST_CASE("max weight matching picks disjoint positive edges") {
  WeightMatrix<Rat> w(2, 2, {Rat(3), Rat(0), Rat(0), Rat(2)});
  MatchingResult<Rat> got = max_weight_matching(w);
  CHECK(got.weight == Rat(5));
  CHECK(got.matching == Matching::of({{0, 0}, {1, 1}}));
}

TEST_CASE("max weight matching crosses when the diagonal loses") {
  WeightMatrix<Rat> w(2, 2, {Rat(1), Rat(2), Rat(2), Rat(1)});
  MatchingResult<Rat> got = max_weight_matching(w);
  CHECK(got.weight == Rat(4));
  CHECK(got.matching == Matching::of({{0, 1}, {1, 0}}));
}

TEST_CASE("max weight matching of all zeros is empty") {
  WeightMatrix<Rat> w(3, 2);
  MatchingResult<Rat> got = max_weight_matching(w);
  CHECK(got.weight == Rat(0));
  CHECK(got.matching.empty());
}

TEST_CASE("zero-weight edges never appear in the result") {
  WeightMatrix<Rat> w(2, 2, {Rat(1), Rat(0), Rat(0), Rat(0)});
  MatchingResult<Rat> got = max_weight_matching(w);
  CHECK(got.matching == Matching::of({{0, 0}}));
}

TEST_CASE("ties go to the lexicographically smallest edge set") {
  WeightMatrix<std::int64_t> w(2, 2, {1, 1, 1, 1});
  CHECK(max_weight_matching(w).matching == Matching::of({{0, 0}, {1, 1}}));
}

TEST_CASE("max weight equals enumeration up to 4x4") {
  RngStream stream(23, "matching-oracle");
  for (int iter = 0; iter < 300; ++iter) {
    RngStream it = stream.child(iter);
    const int n = static_cast<int>(it.next_in(1, 4));
    const int m = static_cast<int>(it.next_in(1, 4));
    std::vector<std::int64_t> cells;
    for (int i = 0; i < n * m; ++i) cells.push_back(it.next_in(0, 9));
    WeightMatrix<std::int64_t> w(n, m, std::move(cells));
    MatchingResult<std::int64_t> got = max_weight_matching(w);
    CHECK(got.weight == testing::enumeration_max_weight(w));
    // result weight is consistent with its own edges
    std::int64_t recount = 0;
    for (const Edge& e : got.matching.edges()) {
      recount += w(e.sender, e.receiver);
      CHECK(w(e.sender, e.receiver) > 0);
    }
    CHECK(recount == got.weight);
  }
}

TEST_CASE("max cardinality matching on multigraphs") {
  MultiEdgeSet a(2, 2, {1, 0, 0, 1});
  CHECK(max_cardinality_matching(a).size() == 2);

  MultiEdgeSet path(2, 2, {1, 1, 0, 1});
  CHECK(max_cardinality_matching(path) == Matching::of({{0, 0}, {1, 1}}));

  MultiEdgeSet fork(2, 2, {1, 1, 0, 0});
  Matching got = max_cardinality_matching(fork);
  CHECK(got.size() == 1);
  CHECK(got == Matching::of({{0, 0}}));  // tie broken to the smallest receiver
}

TEST_CASE("max cardinality equals enumeration up to 4x4") {
  RngStream stream(29, "cardinality-oracle");
  for (int iter = 0; iter < 200; ++iter) {
    RngStream it = stream.child(iter);
    const int n = static_cast<int>(it.next_in(1, 4));
    const int m = static_cast<int>(it.next_in(1, 4));
    std::vector<std::int64_t> mult;
    for (int i = 0; i < n * m; ++i) mult.push_back(it.next_in(0, 2));
    MultiEdgeSet edges(n, m, std::move(mult));
    CHECK(max_cardinality_matching(edges).size() == testing::enumeration_max_cardinality(edges));
  }
}

TEST_CASE("matching enumeration counts") {
  CHECK(enumerate_matchings(2, 2).size() == 7);
  CHECK(enumerate_matchings(3, 3).size() == 34);
  CHECK(enumerate_matchings(5, 5).size() == 1546);
}

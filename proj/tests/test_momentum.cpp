#include <doctest.h>

#include <cstdlib>
#include <map>

#include "dualcluster/errors.hpp"
#include "dualcluster/momentum.hpp"
#include "dualcluster/rng.hpp"

using namespace dualcluster;
using graphs::LabeledGraph;
using momentum::EdgeMomentumAssignment;
using momentum::IntVec;

namespace {

bool all_zero(const IntVec& v) {
  for (auto c : v)
    if (c) return false;
  return true;
}

bool admissible(const EdgeMomentumAssignment& a) {
  for (const auto& v : a.vectors)
    if (all_zero(v)) return false;
  for (int k = 1; k <= a.graph.n; ++k)
    if (!all_zero(momentum::vertex_sum(a, k))) return false;
  return true;
}

}  // namespace

TEST_CASE("vertex sums on the triangle") {
  EdgeMomentumAssignment a;
  a.graph = LabeledGraph::make(3, {{1, 2}, {1, 3}, {2, 3}});
  a.dim = 2;
  a.vectors = {{1, 0}, {-1, 0}, {1, 0}};  // z^2_1, z^3_1, z^3_2
  for (int k = 1; k <= 3; ++k) CHECK(all_zero(momentum::vertex_sum(a, k)));
}

TEST_CASE("vertex sums on a single edge") {
  EdgeMomentumAssignment a;
  a.graph = LabeledGraph::make(2, {{1, 2}});
  a.dim = 2;
  a.vectors = {{5, -2}};
  CHECK(momentum::vertex_sum(a, 1) == IntVec{-5, 2});
  CHECK(momentum::vertex_sum(a, 2) == IntVec{5, -2});
  CHECK_THROWS_AS(momentum::vertex_sum(a, 3), Error);
}

TEST_CASE("vertex sum of the empty graph is zero") {
  EdgeMomentumAssignment a;
  a.graph = LabeledGraph::make(4, {});
  a.dim = 3;
  for (int k = 1; k <= 4; ++k) CHECK(all_zero(momentum::vertex_sum(a, k)));
}

TEST_CASE("square merged with a triangle through a shared edge") {
  // square 1-2-5-4 and triangle 2-3-5 share edge (2,5); edge values
  // v, -v, -v on the square's outer edges, w, w on the triangle edges,
  // v - w on the shared edge solve all five vertex constraints.
  EdgeMomentumAssignment a;
  a.graph = LabeledGraph::make(5, {{1, 2}, {1, 4}, {2, 3}, {2, 5}, {3, 5}, {4, 5}});
  a.dim = 2;
  const IntVec v{3, 1}, w{5, 2};
  auto neg = [](const IntVec& x) { return IntVec{-x[0], -x[1]}; };
  auto minus = [](const IntVec& x, const IntVec& y) { return IntVec{x[0] - y[0], x[1] - y[1]}; };
  a.vectors = {v, neg(v), w, minus(v, w), w, neg(v)};
  CHECK(admissible(a));

  // the constructive route succeeds on the same graph
  const auto built = momentum::construct_assignment(a.graph, 2, 99);
  CHECK(admissible(built));
}

TEST_CASE("construction succeeds on every valid graph up to n = 6") {
  for (int n = 3; n <= 6; ++n) {
    for (const auto& g : graphs::all_valid(n)) {
      const auto a = momentum::construct_assignment(g, 2, 12345);
      CHECK(admissible(a));
    }
  }
}

TEST_CASE("construction on sampled graphs at n = 7 and 8") {
  rng::Stream stream(31337, 0);
  for (int i = 0; i < 40; ++i) {
    const auto g = graphs::sample_valid(7 + i % 2, stream);
    const auto a = momentum::construct_assignment(g, 3, 1000 + i);
    CHECK(admissible(a));
  }
}

TEST_CASE("construction is deterministic in (g, d, seed)") {
  const auto g = graphs::all_valid(5).at(17);
  const auto a = momentum::construct_assignment(g, 2, 77);
  const auto b = momentum::construct_assignment(g, 2, 77);
  CHECK(a.vectors == b.vectors);
}

TEST_CASE("cycles carry a single magnitude") {
  for (int n : {3, 5, 8}) {
    std::vector<std::pair<int, int>> ring;
    for (int i = 1; i < n; ++i) ring.emplace_back(i, i + 1);
    ring.emplace_back(1, n);
    const auto a = momentum::construct_assignment(LabeledGraph::make(n, ring), 1, 5);
    const auto c = std::abs(a.vectors[0][0]);
    CHECK(c != 0);
    for (const auto& v : a.vectors) CHECK(std::abs(v[0]) == c);
  }
}

TEST_CASE("bridged graphs are certified infeasible") {
  const auto path = LabeledGraph::make(3, {{1, 2}, {2, 3}});
  const auto cert = momentum::certify_infeasible(path);
  REQUIRE(cert.has_value());
  CHECK((cert == graphs::Edge{1, 2} || cert == graphs::Edge{2, 3}));

  const auto pendant = LabeledGraph::make(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}});
  const auto cert2 = momentum::certify_infeasible(pendant);
  REQUIRE(cert2.has_value());
  CHECK(*cert2 == graphs::Edge{1, 4});

  const auto k4 = LabeledGraph::make(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
  CHECK_FALSE(momentum::certify_infeasible(k4).has_value());
}

TEST_CASE("exhaustive rejection of bridged graphs up to n = 5") {
  for (int n = 3; n <= 5; ++n) {
    const int m = n * (n - 1) / 2;
    for (std::uint64_t mask = 1; mask < (1ULL << m); ++mask) {
      LabeledGraph g;
      g.n = n;
      int bit = 0;
      for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b, ++bit)
          if (mask >> bit & 1) g.edges.push_back({a, b});
      if (!graphs::spanning_connected(g)) continue;
      const bool bridged = graphs::find_bridge(g).has_value();
      const auto cert = momentum::certify_infeasible(g);
      CHECK(cert.has_value() == bridged);
      if (bridged) {
        CHECK_THROWS_AS((void)momentum::construct_assignment(g, 2, 1), Error);
      }
    }
  }
}

TEST_CASE("infeasibility error names a bridge") {
  const auto path = LabeledGraph::make(3, {{1, 2}, {2, 3}});
  try {
    (void)momentum::construct_assignment(path, 2, 1);
    FAIL("expected an infeasibility error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
    CHECK(std::string(e.what()).find("bridge") != std::string::npos);
  }
}

TEST_CASE("complete-graph general solution") {
  // n = 3: the single free value propagates with signs
  {
    const auto a = momentum::complete_graph_solution(3, 1, {{{1, 2}, {4}}});
    CHECK(a.vectors[a.graph.edge_index(1, 3)] == IntVec{-4});
    CHECK(a.vectors[a.graph.edge_index(2, 3)] == IntVec{4});
  }
  // n = 4 with zero free values stays zero
  {
    const auto a = momentum::complete_graph_solution(4, 2, {});
    for (const auto& v : a.vectors) CHECK(all_zero(v));
  }
  // n = 4 worked example
  {
    const auto a = momentum::complete_graph_solution(
        4, 2, {{{1, 2}, {1, 0}}, {{1, 3}, {0, 1}}, {{2, 3}, {2, 0}}});
    CHECK(a.vectors[a.graph.edge_index(1, 4)] == IntVec{-1, -1});
    CHECK(a.vectors[a.graph.edge_index(2, 4)] == IntVec{-1, 0});
    CHECK(a.vectors[a.graph.edge_index(3, 4)] == IntVec{2, 1});
  }
  // the constraints hold for arbitrary free values
  {
    rng::Stream stream(5, 5);
    std::map<std::pair<int, int>, IntVec> free;
    for (int a = 1; a <= 5; ++a)
      for (int b = a + 1; b <= 5; ++b)
        free[{a, b}] = {static_cast<std::int64_t>(stream.next_below(19)) - 9,
                        static_cast<std::int64_t>(stream.next_below(19)) - 9};
    const auto sol = momentum::complete_graph_solution(6, 2, free);
    for (int k = 1; k <= 6; ++k) CHECK(all_zero(momentum::vertex_sum(sol, k)));
  }
  CHECK_THROWS_AS(momentum::complete_graph_solution(2, 1, {}), Error);
}

TEST_CASE("assignment dump format") {
  EdgeMomentumAssignment a;
  a.graph = LabeledGraph::make(3, {{1, 2}, {1, 3}, {2, 3}});
  a.dim = 2;
  a.vectors = {{1, 0}, {-1, 0}, {1, 0}};
  CHECK(momentum::to_dump(a) == "1-2: (1,0)\n1-3: (-1,0)\n2-3: (1,0)\n");
}

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <set>

#include "dualcluster/errors.hpp"
#include "dualcluster/graphs.hpp"
#include "dualcluster/rng.hpp"

using namespace dualcluster;
using graphs::LabeledGraph;

namespace {

// Independent validity oracle: connectivity by vertex-set growth, bridges by
// removing each edge and retesting connectivity. Deliberately avoids the
// low-link machinery used by the library.
bool oracle_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n == 1) return true;
  std::set<int> seen{1};
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto [a, b] : edges) {
      if (seen.count(a) && !seen.count(b)) { seen.insert(b); grew = true; }
      if (seen.count(b) && !seen.count(a)) { seen.insert(a); grew = true; }
    }
  }
  return static_cast<int>(seen.size()) == n;
}

bool oracle_has_bridge(const std::vector<std::pair<int, int>>& edges) {
  for (size_t i = 0; i < edges.size(); ++i) {
    std::vector<std::pair<int, int>> rest;
    for (size_t j = 0; j < edges.size(); ++j)
      if (j != i) rest.push_back(edges[j]);
    // removing a bridge disconnects its endpoints
    std::set<int> seen{edges[i].first};
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto [a, b] : rest) {
        if (seen.count(a) && !seen.count(b)) { seen.insert(b); grew = true; }
        if (seen.count(b) && !seen.count(a)) { seen.insert(a); grew = true; }
      }
    }
    if (!seen.count(edges[i].second)) return true;
  }
  return false;
}

bool oracle_valid(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n == 1) return edges.empty();
  if (n == 2) return false;
  if (edges.empty()) return false;
  return oracle_connected(n, edges) && !oracle_has_bridge(edges);
}

std::vector<std::pair<int, int>> mask_edges(int n, std::uint64_t mask) {
  std::vector<std::pair<int, int>> edges;
  int bit = 0;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b, ++bit)
      if (mask >> bit & 1) edges.emplace_back(a, b);
  return edges;
}

std::vector<std::string> oracle_family_lines(int n) {
  const int m = n * (n - 1) / 2;
  std::vector<std::string> lines;
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    const auto edges = mask_edges(n, mask);
    if (oracle_valid(n, edges))
      lines.push_back(graphs::to_line(LabeledGraph::make(n, edges)));
  }
  std::sort(lines.begin(), lines.end());
  return lines;
}

LabeledGraph bowtie() {
  // two triangles sharing vertex 3
  return LabeledGraph::make(5, {{1, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5}, {4, 5}});
}

LabeledGraph complete4() {
  return LabeledGraph::make(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
}

LabeledGraph diamond() {
  return LabeledGraph::make(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}});
}

}  // namespace

TEST_CASE("census matches the exhaustive filter up to n = 6") {
  const std::uint64_t expected_counts[] = {1, 0, 1, 10, 253, 11968};
  for (int n = 1; n <= 6; ++n) {
    const auto oracle = oracle_family_lines(n);
    std::vector<std::string> got;
    for (const auto& g : graphs::all_valid(n)) got.push_back(graphs::to_line(g));
    std::vector<std::string> sorted = got;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == oracle);
    // the stream itself arrives in canonical (string-sorted) order
    CHECK(got == sorted);
    CHECK(got.size() == expected_counts[n - 1]);
  }
}

TEST_CASE("canonical order golden rows for n = 4") {
  std::vector<std::string> lines;
  for (const auto& g : graphs::all_valid(4)) lines.push_back(graphs::to_line(g));
  REQUIRE(lines.size() == 10);
  CHECK(lines.front() == "4;1-2,1-3,1-4,2-3,2-4");
  CHECK(lines[1] == "4;1-2,1-3,1-4,2-3,2-4,3-4");
  CHECK(lines.back() == "4;1-3,1-4,2-3,2-4,3-4");
}

TEST_CASE("smallest families") {
  CHECK(graphs::count_valid(1) == 1);
  CHECK(graphs::count_valid(2) == 0);
  CHECK(graphs::count_valid(3) == 1);
  const auto tri = graphs::all_valid(3);
  CHECK(graphs::to_line(tri.at(0)) == "3;1-2,1-3,2-3");
}

TEST_CASE("exactly one maximal graph per order") {
  for (int n = 3; n <= 6; ++n) {
    const int full = n * (n - 1) / 2;
    int maximal = 0, minimal_edges = full;
    for (const auto& g : graphs::all_valid(n)) {
      CHECK(g.edge_count() >= n);
      CHECK(g.edge_count() <= full);
      for (int deg : g.degrees()) CHECK(deg >= 2);
      if (g.edge_count() == full) ++maximal;
      minimal_edges = std::min(minimal_edges, g.edge_count());
    }
    CHECK(maximal == 1);
    CHECK(minimal_edges == n);  // cycles
  }
}

TEST_CASE("cycle enumeration") {
  const std::uint64_t expected[] = {1, 3, 12, 60, 360};
  for (int n = 3; n <= 7; ++n) {
    const auto cycles = graphs::all_cycles(n);
    CHECK(cycles.size() == expected[n - 3]);
    for (const auto& c : cycles) {
      CHECK(c.edge_count() == n);
      for (int deg : c.degrees()) CHECK(deg == 2);
      CHECK(graphs::is_valid(c));
    }
    // distinct
    std::set<std::string> uniq;
    for (const auto& c : cycles) uniq.insert(graphs::to_line(c));
    CHECK(uniq.size() == cycles.size());
  }
  CHECK_THROWS_AS(graphs::all_cycles(2), Error);
}

TEST_CASE("cycles at n = 5 equal the 2-regular connected filter") {
  std::set<std::string> filter;
  for (std::uint64_t mask = 0; mask < (1ULL << 10); ++mask) {
    const auto edges = mask_edges(5, mask);
    if (edges.size() != 5) continue;
    const auto g = LabeledGraph::make(5, edges);
    bool all2 = true;
    for (int deg : g.degrees()) all2 = all2 && deg == 2;
    if (all2 && oracle_connected(5, edges)) filter.insert(graphs::to_line(g));
  }
  std::set<std::string> got;
  for (const auto& c : graphs::all_cycles(5)) got.insert(graphs::to_line(c));
  CHECK(got == filter);
}

TEST_CASE("validity spot checks") {
  CHECK(graphs::is_valid(LabeledGraph::make(1, {})));
  CHECK_FALSE(graphs::is_valid(LabeledGraph::make(2, {{1, 2}})));
  CHECK(graphs::is_valid(LabeledGraph::make(3, {{1, 2}, {1, 3}, {2, 3}})));
  CHECK_FALSE(graphs::is_valid(LabeledGraph::make(3, {{1, 2}, {2, 3}})));
  CHECK(graphs::is_valid(bowtie()));
  // oracle agrees on the bowtie
  CHECK(oracle_valid(5, {{1, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5}, {4, 5}}));
}

TEST_CASE("block decomposition") {
  const auto tri = graphs::block_decomposition(LabeledGraph::make(3, {{1, 2}, {1, 3}, {2, 3}}));
  CHECK(tri.blocks.size() == 1);
  CHECK(tri.cut_vertices.empty());

  const auto bow = graphs::block_decomposition(bowtie());
  CHECK(bow.blocks.size() == 2);
  REQUIRE(bow.cut_vertices.size() == 1);
  CHECK(bow.cut_vertices[0] == 3);

  const auto k4 = graphs::block_decomposition(complete4());
  CHECK(k4.blocks.size() == 1);
  CHECK(k4.blocks[0].graph.edge_count() == 6);

  CHECK_THROWS_AS(graphs::block_decomposition(LabeledGraph::make(3, {{1, 2}, {2, 3}})), Error);
}

TEST_CASE("block accounting identities across the families") {
  for (int n = 3; n <= 6; ++n) {
    for (const auto& g : graphs::all_valid(n)) {
      const auto tree = graphs::block_decomposition(g);
      size_t esum = 0, vsum = 0;
      for (const auto& blk : tree.blocks) {
        esum += blk.graph.edges.size();
        vsum += blk.vertex_labels.size() - 1;
      }
      CHECK(esum == g.edges.size());
      CHECK(vsum + 1 == static_cast<size_t>(g.n));
    }
  }
}

TEST_CASE("cycle basis structure") {
  for (int n = 3; n <= 7; ++n) {
    std::vector<std::pair<int, int>> ring;
    for (int i = 1; i < n; ++i) ring.emplace_back(i, i + 1);
    ring.emplace_back(1, n);
    const auto basis = graphs::cycle_basis(LabeledGraph::make(n, ring));
    CHECK(basis.n_free == 1);
    for (int i = 0; i < n; ++i) CHECK(std::abs(basis.coeff.at(i, 0)) == 1);
  }
  CHECK(graphs::cycle_basis(complete4()).n_free == 3);
  CHECK(graphs::cycle_basis(diamond()).n_free == 2);
  CHECK_THROWS_AS(graphs::cycle_basis(LabeledGraph::make(3, {{1, 2}, {2, 3}})), Error);
}

TEST_CASE("every edge is covered by some basis cycle") {
  for (int n = 3; n <= 6; ++n) {
    for (const auto& g : graphs::all_valid(n)) {
      for (const auto& blk : graphs::block_decomposition(g).blocks) {
        const auto basis = graphs::cycle_basis(blk.graph);
        CHECK(basis.n_free == blk.graph.edge_count() - blk.graph.n + 1);
        for (int i = 0; i < blk.graph.edge_count(); ++i) {
          bool covered = false;
          for (int j = 0; j < basis.n_free; ++j) covered |= basis.coeff.at(i, j) != 0;
          CHECK(covered);
        }
      }
    }
  }
}

TEST_CASE("spanning tree counts") {
  for (int n = 3; n <= 8; ++n) {
    std::vector<std::pair<int, int>> ring;
    for (int i = 1; i < n; ++i) ring.emplace_back(i, i + 1);
    ring.emplace_back(1, n);
    CHECK(graphs::count_spanning_trees(LabeledGraph::make(n, ring)) ==
          static_cast<std::uint64_t>(n));
  }
  CHECK(graphs::count_spanning_trees(complete4()) == 16);  // Cayley 4^{4-2}

  // diamond: exhaustive oracle over all 3-edge subsets
  const auto dia = diamond();
  std::uint64_t trees = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << 5); ++mask) {
    if (std::popcount(mask) != 3) continue;
    std::vector<std::pair<int, int>> sub;
    for (int j = 0; j < 5; ++j)
      if (mask >> j & 1) sub.emplace_back(dia.edges[static_cast<size_t>(j)].a,
                                          dia.edges[static_cast<size_t>(j)].b);
    if (oracle_connected(4, sub)) ++trees;  // 3 edges on 4 vertices: connected => tree
  }
  CHECK(trees == 8);
  CHECK(graphs::count_spanning_trees(dia) == trees);
}

TEST_CASE("Gram determinant equals the spanning-tree count on all blocks") {
  for (int n = 3; n <= 6; ++n) {
    for (const auto& g : graphs::all_valid(n)) {
      for (const auto& blk : graphs::block_decomposition(g).blocks) {
        const auto basis = graphs::cycle_basis(blk.graph);
        const auto det = exact::determinant(exact::gram(basis.coeff));
        CHECK(det > 0);
        CHECK(static_cast<std::uint64_t>(det) == graphs::count_spanning_trees(blk.graph));
        // alternative spanning tree, same determinant
        const auto alt = graphs::cycle_basis(blk.graph, graphs::SpanningTreeRule::DfsHighestLabel);
        CHECK(exact::determinant(exact::gram(alt.coeff)) == det);
      }
    }
  }
}

TEST_CASE("capacity ceiling") {
  graphs::EnumerateOptions opts;
  CHECK_THROWS_AS(graphs::count_valid(10, opts), Error);
  try {
    graphs::count_valid(10, opts);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capacity);
    CHECK(std::string(e.what()).find("9") != std::string::npos);
  }
}

TEST_CASE("interchange line round trip") {
  rng::Stream stream(2024, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = graphs::sample_valid(3 + static_cast<int>(stream.next_below(5)), stream);
    const auto back = graphs::from_line(graphs::to_line(g));
    CHECK(back.n == g.n);
    CHECK(back.edges == g.edges);
  }
  CHECK(graphs::to_line(LabeledGraph::make(1, {})) == "1;");
  const auto single = graphs::from_line("1;");
  CHECK(single.n == 1);
  CHECK(single.edges.empty());
  CHECK_THROWS_AS(graphs::from_line("oops"), Error);
}

TEST_CASE("sharded enumeration agrees with sequential") {
  graphs::EnumerateOptions seq;
  graphs::EnumerateOptions par;
  par.shards = 3;
  CHECK(graphs::count_valid(6, par) == graphs::count_valid(6, seq));
  const auto a = graphs::all_valid(6, seq);
  const auto b = graphs::all_valid(6, par);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].edges == b[i].edges);
}

TEST_CASE("limit stops the stream") {
  graphs::EnumerateOptions opts;
  opts.limit = 4;
  std::uint64_t seen = 0;
  graphs::enumerate_valid(5, opts, [&](const LabeledGraph&) {
    ++seen;
    return true;
  });
  CHECK(seen == 4);
}

TEST_CASE("the ceiling order streams promptly under a limit") {
  graphs::EnumerateOptions opts;
  opts.limit = 10;
  std::vector<std::string> lines;
  graphs::enumerate_valid(9, opts, [&](const LabeledGraph& g) {
    lines.push_back(graphs::to_line(g));
    CHECK(graphs::is_valid(g));
    return true;
  });
  REQUIRE(lines.size() == 10);
  CHECK(std::is_sorted(lines.begin(), lines.end()));
  CHECK(lines.front().rfind("9;", 0) == 0);
}

TEST_CASE("sampling is deterministic and valid") {
  rng::Stream s1(7, 1), s2(7, 1);
  for (int i = 0; i < 20; ++i) {
    const auto a = graphs::sample_valid(7, s1);
    const auto b = graphs::sample_valid(7, s2);
    CHECK(graphs::is_valid(a));
    CHECK(a.edges == b.edges);
  }
}

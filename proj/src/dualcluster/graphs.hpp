#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dualcluster/exact.hpp"

namespace dualcluster::graphs {

// Labeled undirected edge, 1-based endpoints, a < b.
struct Edge {
  int a = 0;
  int b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple graph on labeled vertices {1..n}. Edges are kept sorted
// lexicographically; no self-loops, no duplicates.
struct LabeledGraph {
  int n = 0;
  std::vector<Edge> edges;

  static LabeledGraph make(int n, std::vector<std::pair<int, int>> pairs);

  int edge_count() const { return static_cast<int>(edges.size()); }
  std::vector<int> degrees() const;
  // index into `edges` or -1
  int edge_index(int a, int b) const;
  bool has_edge(int a, int b) const { return edge_index(a, b) >= 0; }
};

// Interchange format: one graph per line, "n;a1-b1,a2-b2,...".
std::string to_line(const LabeledGraph& g);
LabeledGraph from_line(const std::string& line);

inline constexpr int kDefaultCeiling = 9;
inline constexpr int kMaxCeiling = 11;  // edge bitmasks require n(n-1)/2 <= 64

struct EnumerateOptions {
  int ceiling = kDefaultCeiling;
  std::uint64_t limit = 0;  // 0 = no limit
  int shards = 1;           // worker threads for count/materialize paths
};

// Connectivity over all n labels (single vertex counts as connected).
bool spanning_connected(const LabeledGraph& g);

// First bridge in edge order, if any.
std::optional<Edge> find_bridge(const LabeledGraph& g);

// Valid cluster graph: the single vertex, or a spanning-connected bridgeless
// graph on n >= 3 labels. Two-vertex graphs are never valid.
bool is_valid(const LabeledGraph& g);

// Streams the valid graphs on {1..n} in canonical order (lexicographic on
// the sorted edge list). The callback returns false to stop early.
// Throws Error(Capacity) when n exceeds the ceiling.
void enumerate_valid(int n, const EnumerateOptions& opts,
                     const std::function<bool(const LabeledGraph&)>& yield);

// Materializes the full family; sharded when opts.shards > 1, with the
// partitions merged back in canonical order.
std::vector<LabeledGraph> all_valid(int n, const EnumerateOptions& opts = {});

std::uint64_t count_valid(int n, const EnumerateOptions& opts = {});

// The (n-1)!/2 distinct n-cycles on {1..n}, canonical order.
void enumerate_cycles_only(int n, const EnumerateOptions& opts,
                           const std::function<bool(const LabeledGraph&)>& yield);
std::vector<LabeledGraph> all_cycles(int n, const EnumerateOptions& opts = {});

// One maximal 2-connected piece of a graph, relabeled to dense labels 1..k.
struct Block {
  LabeledGraph graph;              // dense labels
  std::vector<int> vertex_labels;  // dense label i corresponds to vertex_labels[i-1]
  std::vector<int> edge_parent;    // edge i of graph corresponds to parent edge index
};

struct BlockTree {
  std::vector<Block> blocks;
  std::vector<int> cut_vertices;  // ascending parent labels
  // adjacency of the block-cut tree: per block, the cut vertices it contains
  std::vector<std::vector<int>> block_cut_vertices;
};

// Requires is_valid(g); throws Error(Inconsistent) otherwise.
BlockTree block_decomposition(const LabeledGraph& g);

enum class SpanningTreeRule {
  BfsLowestLabel,  // breadth-first from the lowest label, ascending neighbors
  DfsHighestLabel  // alternative basis, used by invariance checks
};

// Fundamental cycle basis of a 2-connected graph (or a single cycle).
struct CycleBasis {
  int n_free = 0;
  // cycles[j]: directed closed walk as (edge index, sign); sign +1 means the
  // walk traverses the edge from its smaller to its larger endpoint.
  std::vector<std::vector<std::pair<int, int>>> cycles;
  // |E| x n_free matrix with entries in {0, +-1}; column j is cycle j.
  exact::IntMatrix coeff;
};

// Throws Error(Inconsistent) when the input has a bridge or is disconnected.
CycleBasis cycle_basis(const LabeledGraph& block,
                       SpanningTreeRule rule = SpanningTreeRule::BfsLowestLabel);

// Matrix-tree count on the reduced Laplacian, exact integer arithmetic.
// Requires a connected graph.
std::uint64_t count_spanning_trees(const LabeledGraph& g);

}  // namespace dualcluster::graphs

namespace dualcluster::rng {
class Stream;
}

namespace dualcluster::graphs {

// Rejection-samples a valid graph on {1..n} from the uniform edge-subset
// distribution; deterministic given the stream state.
LabeledGraph sample_valid(int n, rng::Stream& stream, int ceiling = kDefaultCeiling);

}  // namespace dualcluster::graphs

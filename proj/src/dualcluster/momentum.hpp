#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dualcluster/graphs.hpp"

namespace dualcluster::momentum {

using IntVec = std::vector<std::int64_t>;

// Integer momentum vectors on the edges of a labeled graph. The vector on
// edge (i,j), i < j, is the variable conjugate to the displacement x_j - x_i.
// An admissible assignment has every vector nonzero and every vertex sum zero.
struct EdgeMomentumAssignment {
  graphs::LabeledGraph graph;
  int dim = 0;
  std::vector<IntVec> vectors;  // aligned with graph.edges
};

// Signed per-vertex sum: Z_k = sum_{i<k} z^k_i - sum_{j>k} z^j_k.
// Edges absent from the graph contribute nothing.
IntVec vertex_sum(const EdgeMomentumAssignment& a, int k);

// Builds an admissible assignment for a valid graph by giving every
// fundamental basis cycle its own vector and superposing them edge-wise.
// Cycle vectors carry distinct dyadic scales with odd coordinates, so edge
// superpositions cannot cancel; a redraw loop guards the invariant anyway.
// Deterministic in (g, d, seed). Throws Error(Infeasible) naming a bridge
// when the graph is not valid.
EdgeMomentumAssignment construct_assignment(const graphs::LabeledGraph& g, int d,
                                            std::uint64_t seed);

// Returns a bridge whose edge variable is forced to zero by {Z_k = 0}, or
// nullopt for a valid graph. The forcing is certified by an exact rank
// computation on the constraint system with and without that edge column.
std::optional<graphs::Edge> certify_infeasible(const graphs::LabeledGraph& g);

// General solution on the complete n-graph: free vectors live on the edges
// of the complete (n-1)-graph (absent entries are zero) and the remaining
// variables are derived so that all vertex sums vanish. Zero edge values are
// permitted here.
EdgeMomentumAssignment complete_graph_solution(
    int n, int d, const std::map<std::pair<int, int>, IntVec>& free_values);

// One edge per line: "i-j: (c1,...,cd)".
std::string to_dump(const EdgeMomentumAssignment& a);

}  // namespace dualcluster::momentum

#include "dualcluster/momentum.hpp"

#include <algorithm>

#include "dualcluster/errors.hpp"
#include "dualcluster/exact.hpp"
#include "dualcluster/rng.hpp"

namespace dualcluster::momentum {

namespace {

void check_dim(int d) {
  if (d < 1 || d > 16) throw Error(ErrorKind::Usage, "momentum dimension out of range");
}

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t c) { return c == 0; });
}

// Signed incidence matrix of the constraint system {Z_k = 0}: the column of
// edge (i,j), i < j, has +1 at row j and -1 at row i.
exact::IntMatrix constraint_matrix(const graphs::LabeledGraph& g) {
  exact::IntMatrix a(g.n, g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    a.at(g.edges[static_cast<size_t>(e)].b - 1, e) = 1;
    a.at(g.edges[static_cast<size_t>(e)].a - 1, e) = -1;
  }
  return a;
}

void verify_all_sums_zero(const EdgeMomentumAssignment& a, const char* who) {
  for (int k = 1; k <= a.graph.n; ++k) {
    if (!is_zero(vertex_sum(a, k)))
      throw Error(ErrorKind::Inconsistent, std::string(who) + ": vertex sum not zero");
  }
}

}  // namespace

IntVec vertex_sum(const EdgeMomentumAssignment& a, int k) {
  if (k < 1 || k > a.graph.n) throw Error(ErrorKind::Usage, "vertex label out of range");
  IntVec sum(static_cast<size_t>(a.dim), 0);
  for (size_t e = 0; e < a.graph.edges.size(); ++e) {
    const auto& edge = a.graph.edges[e];
    int sign = 0;
    if (edge.b == k) sign = 1;        // z^k_i with i < k
    else if (edge.a == k) sign = -1;  // z^j_k with j > k
    if (!sign) continue;
    for (int c = 0; c < a.dim; ++c) sum[static_cast<size_t>(c)] += sign * a.vectors[e][static_cast<size_t>(c)];
  }
  return sum;
}

EdgeMomentumAssignment construct_assignment(const graphs::LabeledGraph& g, int d,
                                            std::uint64_t seed) {
  check_dim(d);
  if (g.n < 3 || g.edges.empty())
    throw Error(ErrorKind::Usage, "assignment needs a nontrivial cluster");
  if (!graphs::is_valid(g)) {
    const auto bridge = graphs::find_bridge(g);
    std::string msg = "graph is not a valid cluster";
    if (bridge)
      msg += ": bridge " + std::to_string(bridge->a) + "-" + std::to_string(bridge->b);
    throw Error(ErrorKind::Infeasible, msg);
  }

  const graphs::BlockTree tree = graphs::block_decomposition(g);

  // Collect every block's fundamental cycles mapped back to parent edges.
  struct CycleRef {
    std::vector<std::pair<int, int>> edges;  // (parent edge index, sign)
  };
  std::vector<CycleRef> cycles;
  for (const auto& blk : tree.blocks) {
    const graphs::CycleBasis basis = graphs::cycle_basis(blk.graph);
    for (const auto& walk : basis.cycles) {
      CycleRef ref;
      for (auto [ei, s] : walk) ref.edges.emplace_back(blk.edge_parent[static_cast<size_t>(ei)], s);
      cycles.push_back(std::move(ref));
    }
  }
  if (cycles.empty()) throw Error(ErrorKind::Inconsistent, "valid nontrivial graph without cycles");

  EdgeMomentumAssignment out;
  out.graph = g;
  out.dim = d;

  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    out.vectors.assign(g.edges.size(), IntVec(static_cast<size_t>(d), 0));
    rng::Stream stream(seed, attempt);
    for (size_t j = 0; j < cycles.size(); ++j) {
      IntVec w(static_cast<size_t>(d));
      for (int c = 0; c < d; ++c) {
        const std::int64_t odd = 2 * static_cast<std::int64_t>(stream.next_below(8)) + 1;
        w[static_cast<size_t>(c)] = odd << j;  // distinct dyadic scale per cycle
      }
      for (auto [pe, s] : cycles[j].edges)
        for (int c = 0; c < d; ++c)
          out.vectors[static_cast<size_t>(pe)][static_cast<size_t>(c)] += s * w[static_cast<size_t>(c)];
    }
    const bool ok = std::none_of(out.vectors.begin(), out.vectors.end(), is_zero);
    if (ok) {
      verify_all_sums_zero(out, "construct_assignment");
      return out;
    }
  }
  throw Error(ErrorKind::Inconsistent, "cycle vector redraw did not terminate");
}

std::optional<graphs::Edge> certify_infeasible(const graphs::LabeledGraph& g) {
  const auto bridge = graphs::find_bridge(g);
  if (!bridge) return std::nullopt;

  // The edge variable of a bridge must vanish: removing its column from the
  // constraint system drops the rank by exactly one, so the solution space
  // lies inside {z_bridge = 0}.
  const exact::IntMatrix a = constraint_matrix(g);
  const int full_rank = exact::rank(a);
  exact::IntMatrix without(a.rows, a.cols - 1);
  const int drop = g.edge_index(bridge->a, bridge->b);
  for (int r = 0; r < a.rows; ++r) {
    int cc = 0;
    for (int c = 0; c < a.cols; ++c) {
      if (c == drop) continue;
      without.at(r, cc++) = a.at(r, c);
    }
  }
  if (exact::rank(without) != full_rank - 1)
    throw Error(ErrorKind::Inconsistent, "bridge certificate failed the rank cross-check");
  return bridge;
}

EdgeMomentumAssignment complete_graph_solution(
    int n, int d, const std::map<std::pair<int, int>, IntVec>& free_values) {
  check_dim(d);
  if (n < 3) throw Error(ErrorKind::Usage, "complete-graph solution needs n >= 3");

  std::vector<std::pair<int, int>> pairs;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) pairs.emplace_back(a, b);

  EdgeMomentumAssignment out;
  out.graph = graphs::LabeledGraph::make(n, pairs);
  out.dim = d;
  out.vectors.assign(out.graph.edges.size(), IntVec(static_cast<size_t>(d), 0));

  auto value = [&](int a, int b) -> IntVec& {
    return out.vectors[static_cast<size_t>(out.graph.edge_index(a, b))];
  };

  for (const auto& [key, vec] : free_values) {
    const auto [a, b] = key;
    if (a < 1 || b <= a || b > n - 1)
      throw Error(ErrorKind::Usage, "free value must sit on the complete (n-1)-graph");
    if (static_cast<int>(vec.size()) != d)
      throw Error(ErrorKind::Usage, "free value has wrong dimension");
    value(a, b) = vec;
  }

  // z^n_l = sum_{j<l} z^l_j - sum_{k=l+1}^{n-1} z^k_l
  for (int l = 1; l <= n - 1; ++l) {
    IntVec z(static_cast<size_t>(d), 0);
    for (int j = 1; j < l; ++j) {
      const IntVec& v = value(j, l);
      for (int c = 0; c < d; ++c) z[static_cast<size_t>(c)] += v[static_cast<size_t>(c)];
    }
    for (int k = l + 1; k <= n - 1; ++k) {
      const IntVec& v = value(l, k);
      for (int c = 0; c < d; ++c) z[static_cast<size_t>(c)] -= v[static_cast<size_t>(c)];
    }
    value(l, n) = z;
  }

  verify_all_sums_zero(out, "complete_graph_solution");
  return out;
}

std::string to_dump(const EdgeMomentumAssignment& a) {
  std::string s;
  for (size_t e = 0; e < a.graph.edges.size(); ++e) {
    s += std::to_string(a.graph.edges[e].a);
    s += '-';
    s += std::to_string(a.graph.edges[e].b);
    s += ": (";
    for (int c = 0; c < a.dim; ++c) {
      if (c) s += ',';
      s += std::to_string(a.vectors[e][static_cast<size_t>(c)]);
    }
    s += ")\n";
  }
  return s;
}

}  // namespace dualcluster::momentum

#include "dualcluster/graphs.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <numeric>

#include "dualcluster/errors.hpp"
#include "dualcluster/parallel.hpp"
#include "dualcluster/rng.hpp"

namespace dualcluster::graphs {

namespace {

// Edges of the complete graph on {1..n} in lexicographic order.
std::vector<Edge> complete_edges(int n) {
  std::vector<Edge> out;
  out.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) out.push_back({a, b});
  return out;
}

void check_order(int n) {
  if (n < 1) throw Error(ErrorKind::Usage, "graph order must be positive");
}

void check_ceiling(int n, int ceiling) {
  check_order(n);
  if (ceiling > kMaxCeiling) ceiling = kMaxCeiling;
  if (n > ceiling) {
    throw Error(ErrorKind::Capacity,
                "enumeration order " + std::to_string(n) +
                    " exceeds the configured ceiling " + std::to_string(ceiling));
  }
}

using AdjMask = std::array<std::uint16_t, 12>;

// Connectivity over all n vertices given neighbor bitmasks.
bool masks_connected(int n, const AdjMask& adj) {
  if (n <= 1) return true;
  std::uint16_t seen = 1, frontier = 1;
  const std::uint16_t all = static_cast<std::uint16_t>((1u << n) - 1);
  while (frontier) {
    std::uint16_t next = 0;
    while (frontier) {
      const int v = std::countr_zero(frontier);
      frontier &= static_cast<std::uint16_t>(frontier - 1);
      next |= adj[static_cast<size_t>(v)];
    }
    next &= static_cast<std::uint16_t>(~seen);
    seen |= next;
    if (seen == all) return true;
    frontier = next;
  }
  return seen == all;
}

// Bridge detection by DFS low-link over neighbor bitmasks. Returns the pair
// (parent, child) of the first tree edge found with low[child] > disc[parent],
// or {0,0} when the graph is bridgeless. Vertices are 0-based here.
struct BridgeFinder {
  int n;
  const AdjMask& adj;
  std::array<int, 12> disc{};
  std::array<int, 12> low{};
  int timer = 0;
  std::pair<int, int> bridge{-1, -1};

  BridgeFinder(int n_, const AdjMask& adj_) : n(n_), adj(adj_) { disc.fill(-1); }

  void dfs(int v, int parent) {
    disc[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = timer++;
    std::uint16_t nb = adj[static_cast<size_t>(v)];
    bool skipped_parent = false;
    while (nb) {
      const int w = std::countr_zero(nb);
      nb &= static_cast<std::uint16_t>(nb - 1);
      if (w == parent && !skipped_parent) {
        // simple graphs: exactly one copy of the parent edge
        skipped_parent = true;
        continue;
      }
      if (disc[static_cast<size_t>(w)] < 0) {
        dfs(w, v);
        if (bridge.first >= 0) return;
        low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)], low[static_cast<size_t>(w)]);
        if (low[static_cast<size_t>(w)] > disc[static_cast<size_t>(v)]) {
          bridge = {v, w};
          return;
        }
      } else {
        low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)], disc[static_cast<size_t>(w)]);
      }
    }
  }
};

std::pair<int, int> first_bridge(int n, const AdjMask& adj) {
  BridgeFinder f(n, adj);
  for (int v = 0; v < n; ++v) {
    if (f.disc[static_cast<size_t>(v)] < 0) f.dfs(v, -1);
    if (f.bridge.first >= 0) break;
  }
  return f.bridge;
}

AdjMask adjacency_of(const LabeledGraph& g) {
  AdjMask adj{};
  for (const Edge& e : g.edges) {
    adj[static_cast<size_t>(e.a - 1)] |= static_cast<std::uint16_t>(1u << (e.b - 1));
    adj[static_cast<size_t>(e.b - 1)] |= static_cast<std::uint16_t>(1u << (e.a - 1));
  }
  return adj;
}

// Depth-first walk over edge subsets in canonical order with feasibility
// pruning against the maximal completion of each subtree.
class Enumerator {
 public:
  Enumerator(int n, std::uint64_t limit,
             const std::function<bool(const LabeledGraph&)>& yield)
      : n_(n), pairs_(complete_edges(n)), m_(static_cast<int>(pairs_.size())),
        limit_(limit), yield_(yield) {
    suffix_adj_.resize(static_cast<size_t>(m_) + 1);
    suffix_deg_.resize(static_cast<size_t>(m_) + 1);
    AdjMask adj{};
    std::array<int, 12> deg{};
    suffix_adj_[static_cast<size_t>(m_)] = adj;
    suffix_deg_[static_cast<size_t>(m_)] = deg;
    for (int k = m_ - 1; k >= 0; --k) {
      const Edge& e = pairs_[static_cast<size_t>(k)];
      adj[static_cast<size_t>(e.a - 1)] |= static_cast<std::uint16_t>(1u << (e.b - 1));
      adj[static_cast<size_t>(e.b - 1)] |= static_cast<std::uint16_t>(1u << (e.a - 1));
      ++deg[static_cast<size_t>(e.a - 1)];
      ++deg[static_cast<size_t>(e.b - 1)];
      suffix_adj_[static_cast<size_t>(k)] = adj;
      suffix_deg_[static_cast<size_t>(k)] = deg;
    }
    scratch_.n = n;
  }

  // Walks the subtree rooted at the current set, next admissible edge k.
  void walk(int k) {
    if (stopped_) return;
    maybe_emit();
    if (stopped_ || k >= m_) return;
    if (!completion_feasible(k)) return;
    for (int j = k; j < m_ && !stopped_; ++j) {
      add_edge(j);
      walk(j + 1);
      remove_edge(j);
    }
  }

  void add_edge(int j) {
    const Edge& e = pairs_[static_cast<size_t>(j)];
    adj_[static_cast<size_t>(e.a - 1)] ^= static_cast<std::uint16_t>(1u << (e.b - 1));
    adj_[static_cast<size_t>(e.b - 1)] ^= static_cast<std::uint16_t>(1u << (e.a - 1));
    ++deg_[static_cast<size_t>(e.a - 1)];
    ++deg_[static_cast<size_t>(e.b - 1)];
    current_.push_back(j);
  }

  void remove_edge(int j) {
    const Edge& e = pairs_[static_cast<size_t>(j)];
    adj_[static_cast<size_t>(e.a - 1)] ^= static_cast<std::uint16_t>(1u << (e.b - 1));
    adj_[static_cast<size_t>(e.b - 1)] ^= static_cast<std::uint16_t>(1u << (e.a - 1));
    --deg_[static_cast<size_t>(e.a - 1)];
    --deg_[static_cast<size_t>(e.b - 1)];
    current_.pop_back();
  }

  bool stopped() const { return stopped_; }

 private:
  void maybe_emit() {
    if (n_ == 1) {
      if (current_.empty()) emit();
      return;
    }
    if (n_ == 2) return;
    if (static_cast<int>(current_.size()) < n_) return;
    for (int v = 0; v < n_; ++v)
      if (deg_[static_cast<size_t>(v)] < 2) return;
    if (!masks_connected(n_, adj_)) return;
    if (first_bridge(n_, adj_).first >= 0) return;
    emit();
  }

  void emit() {
    scratch_.edges.clear();
    for (int j : current_) scratch_.edges.push_back(pairs_[static_cast<size_t>(j)]);
    ++emitted_;
    if (!yield_(scratch_)) stopped_ = true;
    if (limit_ && emitted_ >= limit_) stopped_ = true;
  }

  bool completion_feasible(int k) const {
    if (n_ < 3) return false;
    const auto& sdeg = suffix_deg_[static_cast<size_t>(k)];
    for (int v = 0; v < n_; ++v)
      if (deg_[static_cast<size_t>(v)] + sdeg[static_cast<size_t>(v)] < 2) return false;
    AdjMask full;
    const auto& sadj = suffix_adj_[static_cast<size_t>(k)];
    for (int v = 0; v < n_; ++v)
      full[static_cast<size_t>(v)] = static_cast<std::uint16_t>(adj_[static_cast<size_t>(v)] | sadj[static_cast<size_t>(v)]);
    return masks_connected(n_, full);
  }

  int n_;
  std::vector<Edge> pairs_;
  int m_;
  std::uint64_t limit_;
  const std::function<bool(const LabeledGraph&)>& yield_;
  std::vector<AdjMask> suffix_adj_;
  std::vector<std::array<int, 12>> suffix_deg_;
  AdjMask adj_{};
  std::array<int, 12> deg_{};
  std::vector<int> current_;
  LabeledGraph scratch_;
  std::uint64_t emitted_ = 0;
  bool stopped_ = false;
};

}  // namespace

LabeledGraph LabeledGraph::make(int n, std::vector<std::pair<int, int>> pairs) {
  check_order(n);
  LabeledGraph g;
  g.n = n;
  g.edges.reserve(pairs.size());
  for (auto& [a, b] : pairs) {
    if (a == b) throw Error(ErrorKind::Usage, "self-loop rejected");
    if (a > b) std::swap(a, b);
    if (a < 1 || b > n) throw Error(ErrorKind::Usage, "edge endpoint out of range");
    g.edges.push_back({a, b});
  }
  std::sort(g.edges.begin(), g.edges.end());
  if (std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end())
    throw Error(ErrorKind::Usage, "parallel edge rejected");
  return g;
}

std::vector<int> LabeledGraph::degrees() const {
  std::vector<int> deg(static_cast<size_t>(n), 0);
  for (const Edge& e : edges) {
    ++deg[static_cast<size_t>(e.a - 1)];
    ++deg[static_cast<size_t>(e.b - 1)];
  }
  return deg;
}

int LabeledGraph::edge_index(int a, int b) const {
  if (a > b) std::swap(a, b);
  const Edge probe{a, b};
  const auto it = std::lower_bound(edges.begin(), edges.end(), probe);
  if (it != edges.end() && *it == probe) return static_cast<int>(it - edges.begin());
  return -1;
}

std::string to_line(const LabeledGraph& g) {
  std::string s = std::to_string(g.n);
  s += ';';
  for (size_t i = 0; i < g.edges.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(g.edges[i].a);
    s += '-';
    s += std::to_string(g.edges[i].b);
  }
  return s;
}

LabeledGraph from_line(const std::string& line) {
  const size_t semi = line.find(';');
  if (semi == std::string::npos) throw Error(ErrorKind::Usage, "graph line missing ';'");
  int n = 0;
  auto [p, ec] = std::from_chars(line.data(), line.data() + semi, n);
  if (ec != std::errc() || p != line.data() + semi)
    throw Error(ErrorKind::Usage, "bad graph order in line");
  std::vector<std::pair<int, int>> pairs;
  size_t pos = semi + 1;
  while (pos < line.size()) {
    size_t next = line.find(',', pos);
    if (next == std::string::npos) next = line.size();
    const size_t dash = line.find('-', pos);
    if (dash == std::string::npos || dash >= next)
      throw Error(ErrorKind::Usage, "bad edge token in line");
    int a = 0, b = 0;
    if (std::from_chars(line.data() + pos, line.data() + dash, a).ec != std::errc() ||
        std::from_chars(line.data() + dash + 1, line.data() + next, b).ec != std::errc())
      throw Error(ErrorKind::Usage, "bad edge endpoints in line");
    pairs.emplace_back(a, b);
    pos = next + 1;
  }
  return LabeledGraph::make(n, std::move(pairs));
}

bool spanning_connected(const LabeledGraph& g) {
  return masks_connected(g.n, adjacency_of(g));
}

std::optional<Edge> find_bridge(const LabeledGraph& g) {
  const auto br = first_bridge(g.n, adjacency_of(g));
  if (br.first < 0) return std::nullopt;
  int a = br.first + 1, b = br.second + 1;
  if (a > b) std::swap(a, b);
  return Edge{a, b};
}

bool is_valid(const LabeledGraph& g) {
  if (g.n == 1) return g.edges.empty();
  if (g.n == 2) return false;
  if (g.edge_count() < g.n) return false;
  if (!spanning_connected(g)) return false;
  return !find_bridge(g).has_value();
}

void enumerate_valid(int n, const EnumerateOptions& opts,
                     const std::function<bool(const LabeledGraph&)>& yield) {
  check_ceiling(n, opts.ceiling);
  Enumerator e(n, opts.limit, yield);
  e.walk(0);
}

namespace {

// Subtree tasks for sharded traversal: the empty set and the singletons are
// emit-only tasks, and each ordered pair of first edges roots a full subtree.
// Task order equals canonical stream order, so per-task buffers concatenate
// back losslessly.
template <typename PerGraph>
void sharded_canonical(int n, const EnumerateOptions& opts, PerGraph per_task_graph) {
  const int m = n * (n - 1) / 2;

  struct Task {
    std::vector<int> prefix;
    int next;  // -1: emit the prefix only; else walk the subtree from here
  };
  std::vector<Task> tasks;
  tasks.push_back({{}, -1});
  for (int i = 0; i < m; ++i) tasks.push_back({{i}, -1});
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) tasks.push_back({{i, j}, j + 1});

  parallel::run_tasks(tasks.size(), opts.shards, [&](std::uint64_t t) {
    const Task& task = tasks[static_cast<size_t>(t)];
    Enumerator e(n, 0, [&](const LabeledGraph& g) {
      per_task_graph(t, g);
      return true;
    });
    for (int j : task.prefix) e.add_edge(j);
    e.walk(task.next < 0 ? m : task.next);
  });
}

}  // namespace

std::vector<LabeledGraph> all_valid(int n, const EnumerateOptions& opts) {
  check_ceiling(n, opts.ceiling);
  if (opts.shards <= 1 || n <= 4) {
    std::vector<LabeledGraph> out;
    enumerate_valid(n, opts, [&](const LabeledGraph& g) {
      out.push_back(g);
      return true;
    });
    return out;
  }
  const std::vector<Edge> pairs = complete_edges(n);
  const int m = static_cast<int>(pairs.size());
  std::vector<std::vector<LabeledGraph>> buffers(
      static_cast<size_t>(1 + m + static_cast<size_t>(m) * (m - 1) / 2));
  sharded_canonical(n, opts, [&](std::uint64_t t, const LabeledGraph& g) {
    buffers[static_cast<size_t>(t)].push_back(g);
  });
  std::vector<LabeledGraph> out;
  std::uint64_t kept = 0;
  for (auto& buf : buffers) {
    for (auto& g : buf) {
      if (opts.limit && kept >= opts.limit) return out;
      out.push_back(std::move(g));
      ++kept;
    }
  }
  return out;
}

std::uint64_t count_valid(int n, const EnumerateOptions& opts) {
  check_ceiling(n, opts.ceiling);
  if (opts.shards <= 1) {
    std::uint64_t count = 0;
    enumerate_valid(n, opts, [&](const LabeledGraph&) {
      ++count;
      return true;
    });
    return count;
  }
  const std::vector<Edge> pairs = complete_edges(n);
  const int m = static_cast<int>(pairs.size());
  std::vector<std::uint64_t> counts(
      static_cast<size_t>(1 + m + static_cast<size_t>(m) * (m - 1) / 2), 0);
  sharded_canonical(n, opts, [&](std::uint64_t t, const LabeledGraph&) {
    ++counts[static_cast<size_t>(t)];
  });
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void enumerate_cycles_only(int n, const EnumerateOptions& opts,
                           const std::function<bool(const LabeledGraph&)>& yield) {
  for (const LabeledGraph& g : all_cycles(n, opts))
    if (!yield(g)) return;
}

std::vector<LabeledGraph> all_cycles(int n, const EnumerateOptions& opts) {
  if (n < 3) throw Error(ErrorKind::Usage, "cycles need at least 3 vertices");
  check_ceiling(n, opts.ceiling);
  std::vector<int> rest(static_cast<size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 2);
  std::vector<LabeledGraph> out;
  do {
    if (rest.front() > rest.back()) continue;  // kill the reversed duplicate
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<size_t>(n));
    int prev = 1;
    for (int v : rest) {
      pairs.emplace_back(prev, v);
      prev = v;
    }
    pairs.emplace_back(prev, 1);
    out.push_back(LabeledGraph::make(n, std::move(pairs)));
  } while (std::next_permutation(rest.begin(), rest.end()));
  std::sort(out.begin(), out.end(),
            [](const LabeledGraph& x, const LabeledGraph& y) { return x.edges < y.edges; });
  if (opts.limit && out.size() > opts.limit) out.resize(opts.limit);
  return out;
}

BlockTree block_decomposition(const LabeledGraph& g) {
  if (!is_valid(g))
    throw Error(ErrorKind::Inconsistent, "block decomposition requires a valid cluster graph");
  BlockTree tree;
  if (g.n == 1) return tree;

  // Hopcroft-Tarjan biconnected components with an explicit edge stack.
  const int n = g.n;
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n));  // (neighbor, edge idx)
  for (int i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges[static_cast<size_t>(i)];
    adj[static_cast<size_t>(e.a - 1)].emplace_back(e.b - 1, i);
    adj[static_cast<size_t>(e.b - 1)].emplace_back(e.a - 1, i);
  }
  std::vector<int> disc(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
  std::vector<int> edge_stack;
  std::vector<std::vector<int>> block_edges;
  std::vector<bool> is_cut(static_cast<size_t>(n), false);
  int timer = 0;

  std::function<void(int, int)> dfs = [&](int v, int parent_edge) {
    disc[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = timer++;
    int children = 0;
    for (const auto& [w, ei] : adj[static_cast<size_t>(v)]) {
      if (ei == parent_edge) continue;
      if (disc[static_cast<size_t>(w)] < 0) {
        ++children;
        edge_stack.push_back(ei);
        dfs(w, ei);
        low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)], low[static_cast<size_t>(w)]);
        if (low[static_cast<size_t>(w)] >= disc[static_cast<size_t>(v)]) {
          if (parent_edge != -1 || children > 1) is_cut[static_cast<size_t>(v)] = true;
          std::vector<int> comp;
          while (!edge_stack.empty()) {
            const int top = edge_stack.back();
            edge_stack.pop_back();
            comp.push_back(top);
            if (top == ei) break;
          }
          block_edges.push_back(std::move(comp));
        }
      } else if (disc[static_cast<size_t>(w)] < disc[static_cast<size_t>(v)]) {
        edge_stack.push_back(ei);
        low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)], disc[static_cast<size_t>(w)]);
      }
    }
  };
  dfs(0, -1);

  for (auto& comp : block_edges) {
    std::sort(comp.begin(), comp.end());
    std::vector<int> labels;
    for (int ei : comp) {
      labels.push_back(g.edges[static_cast<size_t>(ei)].a);
      labels.push_back(g.edges[static_cast<size_t>(ei)].b);
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::vector<std::pair<int, int>> dense;
    auto dense_of = [&](int label) {
      return static_cast<int>(std::lower_bound(labels.begin(), labels.end(), label) -
                              labels.begin()) + 1;
    };
    for (int ei : comp) {
      const Edge& e = g.edges[static_cast<size_t>(ei)];
      dense.emplace_back(dense_of(e.a), dense_of(e.b));
    }
    Block blk;
    blk.graph = LabeledGraph::make(static_cast<int>(labels.size()), std::move(dense));
    blk.vertex_labels = std::move(labels);
    blk.edge_parent = std::move(comp);
    tree.blocks.push_back(std::move(blk));
  }
  // deterministic block order: by smallest parent edge index
  std::sort(tree.blocks.begin(), tree.blocks.end(),
            [](const Block& x, const Block& y) { return x.edge_parent < y.edge_parent; });

  for (int v = 0; v < n; ++v)
    if (is_cut[static_cast<size_t>(v)]) tree.cut_vertices.push_back(v + 1);
  for (const Block& blk : tree.blocks) {
    std::vector<int> cuts;
    for (int label : blk.vertex_labels)
      if (std::binary_search(tree.cut_vertices.begin(), tree.cut_vertices.end(), label))
        cuts.push_back(label);
    tree.block_cut_vertices.push_back(std::move(cuts));
  }

  // block-tree accounting: edges partition, vertices overlap only at cut points
  size_t esum = 0, vsum = 0;
  for (const Block& blk : tree.blocks) {
    esum += blk.graph.edges.size();
    vsum += blk.vertex_labels.size() - 1;
  }
  if (esum != g.edges.size() || vsum + 1 != static_cast<size_t>(g.n))
    throw Error(ErrorKind::Inconsistent, "block tree accounting failed");
  return tree;
}

CycleBasis cycle_basis(const LabeledGraph& block, SpanningTreeRule rule) {
  if (block.n < 3) throw Error(ErrorKind::Inconsistent, "cycle basis needs >= 3 vertices");
  if (!spanning_connected(block))
    throw Error(ErrorKind::Inconsistent, "cycle basis requires a connected graph");
  if (auto br = find_bridge(block))
    throw Error(ErrorKind::Inconsistent,
                "cycle basis rejects a graph with bridge " + std::to_string(br->a) + "-" +
                    std::to_string(br->b));

  const int n = block.n;
  const int m = block.edge_count();
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(n));
  for (int i = 0; i < m; ++i) {
    const Edge& e = block.edges[static_cast<size_t>(i)];
    adj[static_cast<size_t>(e.a - 1)].emplace_back(e.b - 1, i);
    adj[static_cast<size_t>(e.b - 1)].emplace_back(e.a - 1, i);
  }

  std::vector<int> parent(static_cast<size_t>(n), -1);       // parent vertex
  std::vector<int> parent_edge(static_cast<size_t>(n), -1);  // edge to parent
  std::vector<int> order;                                    // visit order
  std::vector<bool> seen(static_cast<size_t>(n), false);

  if (rule == SpanningTreeRule::BfsLowestLabel) {
    std::vector<int> queue{0};
    seen[0] = true;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      const int v = queue[qi];
      order.push_back(v);
      for (const auto& [w, ei] : adj[static_cast<size_t>(v)]) {  // ascending labels: adj built in edge order
        if (!seen[static_cast<size_t>(w)]) {
          seen[static_cast<size_t>(w)] = true;
          parent[static_cast<size_t>(w)] = v;
          parent_edge[static_cast<size_t>(w)] = ei;
          queue.push_back(w);
        }
      }
    }
  } else {
    // depth-first from the highest label, descending neighbor order
    std::function<void(int)> dfs = [&](int v) {
      seen[static_cast<size_t>(v)] = true;
      order.push_back(v);
      auto nbrs = adj[static_cast<size_t>(v)];
      std::sort(nbrs.begin(), nbrs.end(), std::greater<>());
      for (const auto& [w, ei] : nbrs) {
        if (!seen[static_cast<size_t>(w)]) {
          parent[static_cast<size_t>(w)] = v;
          parent_edge[static_cast<size_t>(w)] = ei;
          dfs(w);
        }
      }
    };
    dfs(n - 1);
  }

  std::vector<int> depth(static_cast<size_t>(n), 0);
  for (int v : order)
    if (parent[static_cast<size_t>(v)] >= 0)
      depth[static_cast<size_t>(v)] = depth[static_cast<size_t>(parent[static_cast<size_t>(v)])] + 1;

  std::vector<bool> in_tree(static_cast<size_t>(m), false);
  for (int v = 0; v < n; ++v)
    if (parent_edge[static_cast<size_t>(v)] >= 0) in_tree[static_cast<size_t>(parent_edge[static_cast<size_t>(v)])] = true;

  CycleBasis basis;
  basis.n_free = m - n + 1;
  basis.coeff = exact::IntMatrix(m, basis.n_free);

  // sign +1 when the walk traverses small -> large endpoint
  auto step = [&](int from, int to) {
    const int a = std::min(from, to) + 1, b = std::max(from, to) + 1;
    const int ei = block.edge_index(a, b);
    const int sign = (from < to) ? 1 : -1;
    return std::make_pair(ei, sign);
  };

  int col = 0;
  for (int i = 0; i < m; ++i) {
    if (in_tree[static_cast<size_t>(i)]) continue;
    const Edge& e = block.edges[static_cast<size_t>(i)];
    int a = e.a - 1, b = e.b - 1;
    std::vector<std::pair<int, int>> walk;
    walk.push_back({i, 1});  // a -> b across the chord, a < b
    // climb from b and a to their common ancestor
    std::vector<std::pair<int, int>> up_b, up_a;
    int x = b, y = a;
    while (depth[static_cast<size_t>(x)] > depth[static_cast<size_t>(y)]) {
      up_b.push_back(step(x, parent[static_cast<size_t>(x)]));
      x = parent[static_cast<size_t>(x)];
    }
    while (depth[static_cast<size_t>(y)] > depth[static_cast<size_t>(x)]) {
      up_a.push_back(step(y, parent[static_cast<size_t>(y)]));
      y = parent[static_cast<size_t>(y)];
    }
    while (x != y) {
      up_b.push_back(step(x, parent[static_cast<size_t>(x)]));
      x = parent[static_cast<size_t>(x)];
      up_a.push_back(step(y, parent[static_cast<size_t>(y)]));
      y = parent[static_cast<size_t>(y)];
    }
    // cycle: a -> b, b -> lca, lca -> a (reverse of a's climb)
    for (auto [ei, s] : up_b) walk.push_back({ei, s});
    for (auto it = up_a.rbegin(); it != up_a.rend(); ++it) walk.push_back({it->first, -it->second});

    for (auto [ei, s] : walk) basis.coeff.at(ei, col) = s;
    basis.cycles.push_back(std::move(walk));
    ++col;
  }
  if (col != basis.n_free)
    throw Error(ErrorKind::Inconsistent, "cycle count does not match the cycle-space rank");
  for (int i = 0; i < m; ++i) {
    bool covered = false;
    for (int j = 0; j < basis.n_free; ++j) covered = covered || basis.coeff.at(i, j) != 0;
    if (!covered)
      throw Error(ErrorKind::Inconsistent, "edge not covered by any basis cycle");
  }
  return basis;
}

std::uint64_t count_spanning_trees(const LabeledGraph& g) {
  if (!spanning_connected(g))
    throw Error(ErrorKind::Inconsistent, "spanning-tree count requires a connected graph");
  const int n = g.n;
  if (n == 1) return 1;
  exact::IntMatrix lap(n - 1, n - 1);
  for (const Edge& e : g.edges) {
    const int a = e.a - 1, b = e.b - 1;
    if (a < n - 1) ++lap.at(a, a);
    if (b < n - 1) ++lap.at(b, b);
    if (a < n - 1 && b < n - 1) {
      --lap.at(a, b);
      --lap.at(b, a);
    }
  }
  const std::int64_t det = exact::determinant(lap);
  if (det <= 0) throw Error(ErrorKind::Inconsistent, "matrix-tree determinant not positive");
  return static_cast<std::uint64_t>(det);
}

LabeledGraph sample_valid(int n, rng::Stream& stream, int ceiling) {
  check_ceiling(n, ceiling);
  if (n == 1) return LabeledGraph::make(1, {});
  if (n == 2) throw Error(ErrorKind::Usage, "no valid graphs exist on 2 vertices");
  const std::vector<Edge> pairs = complete_edges(n);
  const int m = static_cast<int>(pairs.size());
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const std::uint64_t mask = stream.next_u64() & ((m == 64) ? ~0ULL : ((1ULL << m) - 1));
    LabeledGraph g;
    g.n = n;
    for (int j = 0; j < m; ++j)
      if (mask >> j & 1) g.edges.push_back(pairs[static_cast<size_t>(j)]);
    if (is_valid(g)) return g;
  }
  throw Error(ErrorKind::Inconsistent, "rejection sampling failed to find a valid graph");
}

}  // namespace dualcluster::graphs

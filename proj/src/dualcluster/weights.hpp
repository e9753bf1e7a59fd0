#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dualcluster/graphs.hpp"
#include "dualcluster/potentials.hpp"

namespace dualcluster::weights {

enum class BlockMode { GaussianExact, CycleExact, MonteCarlo };

// Dimensionless weight of one 2-connected block.
struct BlockWeight {
  double value = 0.0;
  BlockMode mode = BlockMode::GaussianExact;
  double std_error = 0.0;  // 0 for exact modes
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

enum class ClusterMode { Full, CyclesOnly, FiniteL };

struct ClusterWeight {
  int n = 0;
  double value = 0.0;
  ClusterMode mode = ClusterMode::Full;
  double error = 0.0;
  std::uint64_t graph_count = 0;
};

// (-1)^n int vhat_beta(kappa)^n dkappa over R^d: closed form for the
// Gaussian potential, 1-D radial quadrature otherwise.
BlockWeight g_cycle_exact(int n, const potentials::PairPotential& p, int d,
                          double lambda_beta);

// Closed form for the Gaussian potential on an arbitrary block:
//   (-1)^{|E|} (lambda/lambda_beta)^{d(|V|-1)} det(C^T C)^{-d/2},
// where C is a fundamental cycle-basis matrix. The determinant is
// cross-checked against the matrix-tree spanning-tree count.
BlockWeight g_block_gaussian_exact(const graphs::LabeledGraph& block, double lambda,
                                   double lambda_beta, int d);

struct McOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  int shards = 1;       // worker threads; results do not depend on this
  int batches = 64;     // logical streams, also the batched-means resolution
  int dimension_cap = 64;
  graphs::SpanningTreeRule basis = graphs::SpanningTreeRule::BfsLowestLabel;
};

// Importance-sampled block weight over the free cycle variables, with a
// product-Gaussian proposal whose per-cycle width follows vhat_beta.
BlockWeight g_block_mc(const graphs::LabeledGraph& block,
                       const potentials::PairPotential& p, int d, double lambda_beta,
                       const McOptions& mc);

struct QnOptions {
  ClusterMode mode = ClusterMode::Full;
  std::uint64_t budget = 0;  // max graphs in full mode (0: unlimited)
  McOptions mc;
  int ceiling = graphs::kDefaultCeiling;
  bool force_mc = false;  // Monte Carlo blocks even when a closed form applies
  int shards = 1;
};

// q_1 = 1, q_2 = 0; otherwise the block-factorized sum over the valid
// graphs (Full) or the shared cycle weight times 1/2 (CyclesOnly).
ClusterWeight q_n(int n, const potentials::PairPotential& p, int d, double lambda_beta,
                  const QnOptions& opts);

struct FiniteLOptions {
  int zmax = 64;
  double tail_tol = 1e-6;  // accuracy gate on the reported tail bound
  potentials::EhatPath path = potentials::EhatPath::Unfolded;
  int points_per_axis = 0;
  std::uint64_t term_budget = 200'000'000;
};

struct FiniteLWeight {
  ClusterWeight weight;
  double tail_bound = 0.0;
};

// Finite-volume weight: constrained lattice sums with the per-graph delta
// constraints solved through the fundamental cycle basis (the non-tree edge
// values are exactly the free summation variables).
FiniteLWeight q_n_finite_L(int n, const potentials::PeriodizedPotential& pot,
                           double lambda_beta, const FiniteLOptions& opts);

// Exponential-rate representation |q_n| = e^{-n(beta eps + beta delta_n)}.
struct AsymptoticEstimate {
  double beta_epsilon = 0.0;
  std::vector<int> orders;
  std::vector<double> beta_delta;  // aligned with orders
  std::vector<int> alpha;          // signs, aligned with orders
  std::vector<int> skipped;        // zero weights beyond n = 2, flagged
};

// beta*eps extrapolated linearly in 1/n from -ln|q_n|/n; delta_n and the
// signs reproduce the inputs exactly by construction.
AsymptoticEstimate estimate_asymptotics(std::span<const ClusterWeight> weights, double beta);

}  // namespace dualcluster::weights

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dualcluster/potentials.hpp"
#include "dualcluster/weights.hpp"

namespace dualcluster::oracle {

// N particles on the torus of side L with a periodized pair interaction.
// The box side, dimension and inverse temperature live in the potential.
struct FiniteSystem {
  int N = 0;
  double lambda_beta = 1.0;
  const potentials::PeriodizedPotential* pot = nullptr;

  double L() const { return pot->L(); }
  int d() const { return pot->dim(); }
  double beta() const { return pot->beta(); }
};

struct OracleValue {
  double value = 0.0;
  double error = 0.0;
  std::string method;
  double seconds = 0.0;
};

struct DirectOptions {
  int resolution = 4096;           // grid points per axis (d = 1)
  std::uint64_t samples = 4'000'000;  // Monte Carlo fallback (d = 2, N = 3)
  std::uint64_t seed = 1;
  int shards = 1;
  int batches = 64;
};

// Configurational integral for Q_{N,L}: translation invariance reduces it to
// N-1 relative coordinates. d = 1 uses a periodic midpoint grid (N <= 4,
// Richardson error estimate); d = 2 uses Monte Carlo for N = 3.
OracleValue q_direct(const FiniteSystem& sys, const DirectOptions& opts = {});

struct MomentumOptions {
  int zmax = 64;
  potentials::EhatPath path = potentials::EhatPath::Quadrature;
  int points_per_axis = 0;
  bool allow_n4 = false;  // the N = 4 triple lattice sum is opt-in
};

// Momentum-space evaluation of Q_{N,L}: the per-vertex delta constraints are
// solved symbolically and the surviving free variables are summed over the
// lattice with cutoff zmax.
OracleValue q_momentum(const FiniteSystem& sys, const MomentumOptions& opts = {});

struct RecurrenceReport {
  double lhs = 0.0;             // Q_{N,L} from the direct oracle
  double rhs = 0.0;             // recurrence right-hand side
  double residual_rel = 0.0;
  double lhs_error_rel = 0.0;
  double rhs_error_rel = 0.0;
  // true when the residual clears the propagated error budgets, so a
  // nonzero residual would be meaningful rather than numerical noise
  bool residual_exceeds_errors = false;
  std::string note;  // records the E-hat_L(0) reading of the recurrence factor
};

// Tests Q_{N,L} = (1/ rho lambda_beta^d) sum_n E-hat_L(0)^{n(N-n)} q_n^L
// Q_{N-n,L} with both sides computed independently. N <= 4.
RecurrenceReport recurrence_residual(const FiniteSystem& sys,
                                     const DirectOptions& direct = {},
                                     const weights::FiniteLOptions& finite_l = {});

struct LimitFactorRow {
  int N = 0;
  double L = 0.0;
  double lhs = 0.0;  // E-hat_L(0)^{n(N-n)}
  double rhs = 0.0;  // e^{-n rho vhat(0)}
  double gap = 0.0;
};

struct LimitFactorReport {
  std::vector<LimitFactorRow> rows;
  bool gap_monotone = true;
};

// Tabulates the finite-size factor against its thermodynamic limit along a
// ladder of boxes at fixed density (rho L^d must be integral).
LimitFactorReport limit_factor_check(int n, double rho,
                                     std::shared_ptr<const potentials::PairPotential> base,
                                     int d, std::span<const double> ladder,
                                     double beta = 1.0, int quad_points = 0);

}  // namespace dualcluster::oracle

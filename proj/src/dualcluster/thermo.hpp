#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "dualcluster/potentials.hpp"
#include "dualcluster/weights.hpp"

namespace dualcluster::thermo {

// Provider of the cluster weights q_n together with their exponential-rate
// data. Weights follow the beta-absorbed convention of the potentials.
class WeightSource {
 public:
  virtual ~WeightSource() = default;
  virtual std::string describe() const = 0;
  virtual double q(int n) const = 0;
  virtual int max_order() const = 0;
  // beta * epsilon, the log of the convergence radius in the activity-like
  // variable a = e^{beta mu - rho vhat(0)}; +inf when the series terminates.
  virtual double beta_epsilon() const = 0;
  // exact alternating-series structure (the cycles-only closed form)
  virtual bool has_exact_series() const { return false; }
};

// q_n = (-1)^n / (2 n^{d/2}) * r^{n-1} with r = (lambda/lambda_beta)^d:
// the cycles-only approximation of the Gaussian potential.
class CyclesOnlyGaussianSource final : public WeightSource {
 public:
  CyclesOnlyGaussianSource(int d, double lambda, double lambda_beta);
  std::string describe() const override;
  double q(int n) const override;
  int max_order() const override { return std::numeric_limits<int>::max(); }
  double beta_epsilon() const override;
  bool has_exact_series() const override { return true; }
  int dimension() const { return d_; }
  double ratio() const { return r_; }  // (lambda/lambda_beta)^d

 private:
  int d_;
  double r_;
};

// q_1 = 1 and nothing else.
class IdealGasSource final : public WeightSource {
 public:
  std::string describe() const override { return "ideal-gas"; }
  double q(int n) const override { return n == 1 ? 1.0 : 0.0; }
  int max_order() const override { return 1; }
  double beta_epsilon() const override { return std::numeric_limits<double>::infinity(); }
};

// Finite table of numerically computed weights (n = 1..N); the rate data
// come from the linear extrapolation of -ln|q_n|/n.
class TableSource final : public WeightSource {
 public:
  TableSource(std::vector<weights::ClusterWeight> table, double beta);
  std::string describe() const override;
  double q(int n) const override;
  int max_order() const override { return static_cast<int>(table_.size()); }
  double beta_epsilon() const override { return beta_epsilon_; }
  const weights::AsymptoticEstimate& asymptotics() const { return estimate_; }

 private:
  std::vector<weights::ClusterWeight> table_;  // index n-1
  weights::AsymptoticEstimate estimate_;
  double beta_epsilon_;
};

struct ThermoState {
  double rho = 0.0;
  double beta = 1.0;
  double lambda_beta = 1.0;
  int d = 2;
  double vhat0 = 0.0;
  const WeightSource* source = nullptr;
  int n_max = 64;  // truncation for table sources
};

struct ASeriesValue {
  double value = 0.0;
  bool divergent = false;
  double tail_bound = 0.0;
};

// A(mu) = sum_n q_n e^{n(beta mu - rho vhat(0))}; partial sum plus tail
// estimate for table sources, closed alternating form for the exact series.
ASeriesValue A_series(double mu, const ThermoState& state);

// Convergence-radius chemical potential: mu_bar = eps + rho vhat(0)/beta.
double mu_bar(const ThermoState& state);

// Boundary value A(mu_bar), independent of rho; +inf signals a divergent
// tail (no finite critical density).
double A_bar(const WeightSource& source);

// rho_c = A_bar / lambda_beta^d; +inf sentinel when A_bar diverges.
double rho_c(const WeightSource& source, double lambda_beta, int d);

enum class Regime { FiniteClusters, Critical, InfiniteClusters };

struct SolveResult {
  double mu = 0.0;
  Regime regime = Regime::FiniteClusters;
  double residual = 0.0;
  double rho_c = 0.0;
  double infinite_cluster_density = 0.0;
};

// Solves A(mu) = rho lambda_beta^d for mu below the convergence radius;
// at and above the critical density mu sticks at mu_bar and the excess
// density rho - rho_c is reported as carried by infinite clusters.
SolveResult solve_mu(const ThermoState& state);

// B(gamma) = e^-gamma + (1/2) sum_{n>=3} (-1)^n n^{-d/2} e^{-n gamma} and its
// gamma-derivative; gamma = -beta(mu - mu_bar) >= 0. For d >= 2 the
// derivative is negative with a finite limit at gamma -> 0+; d = 1 at
// gamma = 0 raises the divergent-derivative error.
double example_B(double gamma, int d);
double example_dB(double gamma, int d);

// d2f/drho2 = lambda_beta^d / (beta sum_n n q_n a^n) + vhat(0)/beta, and
// dp/drho = rho * d2f/drho2. Requires the finite-cluster regime.
double f_second_derivative(const ThermoState& state, double mu);
double dp_drho(const ThermoState& state, double mu);

struct BoundsReport {
  double lower = 0.0;        // rho lambda_beta^d
  double upper = 0.0;        // rho lambda_beta^d e^{beta rho int u}
  double activity = 0.0;     // e^{beta mu}
  bool lower_checked = true; // only when u >= 0
  bool upper_checked = true; // only when int u is finite
  double integral_u = 0.0;
  bool pass = true;
  std::string notice;
};

BoundsReport activity_bounds_check(const ThermoState& state, double mu,
                                   const potentials::PairPotential& p);

}  // namespace dualcluster::thermo

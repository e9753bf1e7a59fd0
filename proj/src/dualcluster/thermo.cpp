#include "dualcluster/thermo.hpp"

#include <algorithm>
#include <cmath>

#include "dualcluster/errors.hpp"
#include "dualcluster/series.hpp"

namespace dualcluster::thermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SeriesInA {
  // A and sum n q_n a^n in the variable a = e^{beta mu - rho vhat(0)}
  const WeightSource& source;
  int n_max;

  ASeriesValue A(double a) const {
    ASeriesValue out;
    if (a < 0.0) throw Error(ErrorKind::Usage, "activity variable must be nonnegative");
    if (a == 0.0) return out;
    const double beps = source.beta_epsilon();
    const double a_max = std::isfinite(beps) ? std::exp(beps) : kInf;
    if (a > a_max * (1.0 + 1e-14)) {
      out.divergent = true;
      return out;
    }
    if (const auto* ex = dynamic_cast<const CyclesOnlyGaussianSource*>(&source)) {
      const double r = ex->ratio();
      const double x = std::min(r * a, 1.0);
      out.value = a + 0.5 / r * series::alternating_power_sum(0.5 * ex->dimension(), x, 3);
      out.tail_bound = 1e-13 * (std::abs(out.value) + 1.0);
      return out;
    }
    const int top = std::min(source.max_order(), n_max);
    double apow = 1.0;
    double t2 = 0.0, t1 = 0.0, t0 = 0.0;  // last three terms
    for (int n = 1; n <= top; ++n) {
      apow *= a;
      const double t = source.q(n) * apow;
      out.value += t;
      t2 = t1;
      t1 = t0;
      t0 = t;
    }
    // geometric tail bound extrapolated from the last three terms
    if (t0 != 0.0 && t1 != 0.0) {
      double ratio = std::abs(t0 / t1);
      if (t2 != 0.0) ratio = std::max(ratio, std::abs(t1 / t2));
      if (ratio < 0.95) {
        out.tail_bound = std::abs(t0) * ratio / (1.0 - ratio);
      } else {
        out.tail_bound = std::abs(t0) * 20.0;
        if (ratio >= 1.0) out.divergent = true;
      }
    }
    return out;
  }

  double D(double a) const {
    // sum_{n>=1} n q_n a^n
    if (const auto* ex = dynamic_cast<const CyclesOnlyGaussianSource*>(&source)) {
      const double r = ex->ratio();
      const double x = std::min(r * a, 1.0);
      return a + 0.5 / r * series::alternating_power_sum(0.5 * ex->dimension() - 1.0, x, 3);
    }
    const int top = std::min(source.max_order(), n_max);
    double apow = 1.0, acc = 0.0;
    for (int n = 1; n <= top; ++n) {
      apow *= a;
      acc += n * source.q(n) * apow;
    }
    return acc;
  }
};

}  // namespace

CyclesOnlyGaussianSource::CyclesOnlyGaussianSource(int d, double lambda, double lambda_beta)
    : d_(d) {
  if (d < 1) throw Error(ErrorKind::Usage, "dimension must be positive");
  if (!(lambda > 0.0) || !(lambda_beta > 0.0))
    throw Error(ErrorKind::Usage, "length scales must be positive");
  r_ = std::pow(lambda / lambda_beta, d);
}

std::string CyclesOnlyGaussianSource::describe() const {
  return "cycles-only-gaussian{d=" + std::to_string(d_) + ",r=" + std::to_string(r_) + "}";
}

double CyclesOnlyGaussianSource::q(int n) const {
  if (n == 1) return 1.0;
  if (n == 2) return 0.0;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * 0.5 * std::pow(static_cast<double>(n), -0.5 * d_) * std::pow(r_, n - 1);
}

double CyclesOnlyGaussianSource::beta_epsilon() const { return -std::log(r_); }

TableSource::TableSource(std::vector<weights::ClusterWeight> table, double beta)
    : table_(std::move(table)) {
  for (size_t i = 0; i < table_.size(); ++i) {
    if (table_[i].n != static_cast<int>(i) + 1)
      throw Error(ErrorKind::Usage, "weight table must list n = 1..N in order");
  }
  estimate_ = weights::estimate_asymptotics(table_, beta);
  beta_epsilon_ = estimate_.beta_epsilon;
}

std::string TableSource::describe() const {
  return "table{n_max=" + std::to_string(table_.size()) + "}";
}

double TableSource::q(int n) const {
  if (n < 1 || n > static_cast<int>(table_.size())) return 0.0;
  return table_[static_cast<size_t>(n - 1)].value;
}

ASeriesValue A_series(double mu, const ThermoState& state) {
  if (!state.source) throw Error(ErrorKind::Usage, "thermo state has no weight source");
  const double a = std::exp(state.beta * mu - state.rho * state.vhat0);
  return SeriesInA{*state.source, state.n_max}.A(a);
}

double mu_bar(const ThermoState& state) {
  if (!state.source) throw Error(ErrorKind::Usage, "thermo state has no weight source");
  const double beps = state.source->beta_epsilon();
  if (!std::isfinite(beps)) return kInf;
  return (beps + state.rho * state.vhat0) / state.beta;
}

double A_bar(const WeightSource& source) {
  const double beps = source.beta_epsilon();
  if (!std::isfinite(beps)) return kInf;
  if (const auto* ex = dynamic_cast<const CyclesOnlyGaussianSource*>(&source)) {
    // (1/r) [1 + (1/2) sum_{n>=3} (-1)^n n^{-d/2}]
    return (1.0 + 0.5 * series::alternating_power_sum(0.5 * ex->dimension(), 1.0, 3)) /
           ex->ratio();
  }
  // generic: terms alpha_n e^{-n beta delta_n} = q_n e^{n beta eps}
  const double a_max = std::exp(beps);
  std::vector<double> terms;
  double apow = 1.0;
  for (int n = 1; n <= source.max_order(); ++n) {
    apow *= a_max;
    if (n >= 3) terms.push_back(source.q(n) * apow);
  }
  // drop leading zeros (q_2 = 0 and friends)
  while (!terms.empty() && terms.front() == 0.0) terms.erase(terms.begin());
  if (terms.empty()) return std::exp(beps);

  bool alternating = true;
  for (size_t i = 1; i < terms.size(); ++i)
    if (terms[i] * terms[i - 1] > 0.0) alternating = false;

  if (alternating) {
    // conditionally convergent (or Abel-regularizable) tail
    return std::exp(beps) + series::euler_sum_alternating(terms);
  }
  // same-sign tail: summable only when the terms still die out
  const double last = std::abs(terms.back());
  const double prev = terms.size() > 1 ? std::abs(terms[terms.size() - 2]) : last;
  const double ratio = prev > 0.0 ? last / prev : 0.0;
  double scale = 0.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  if (ratio >= 0.95 && last > 1e-10 * (1.0 + scale)) return kInf;  // divergence report
  double tail_sum = 0.0;
  for (double t : terms) tail_sum += t;
  if (ratio > 0.0 && ratio < 0.95) tail_sum += terms.back() * ratio / (1.0 - ratio);
  return std::exp(beps) + tail_sum;
}

double rho_c(const WeightSource& source, double lambda_beta, int d) {
  const double abar = A_bar(source);
  if (!std::isfinite(abar)) return kInf;
  if (abar <= 0.0)
    throw Error(ErrorKind::Inconsistent,
                "weight source failed the consistency test: boundary series value " +
                    std::to_string(abar) + " is not positive");
  return abar / std::pow(lambda_beta, d);
}

SolveResult solve_mu(const ThermoState& state) {
  if (!state.source) throw Error(ErrorKind::Usage, "thermo state has no weight source");
  if (!(state.rho > 0.0)) throw Error(ErrorKind::Usage, "solve_mu needs rho > 0");

  const double target = state.rho * std::pow(state.lambda_beta, state.d);
  const SeriesInA series{*state.source, state.n_max};

  SolveResult res;
  res.rho_c = rho_c(*state.source, state.lambda_beta, state.d);

  const double beps = state.source->beta_epsilon();
  const double a_max = std::isfinite(beps) ? std::exp(beps) : kInf;

  if (std::isfinite(res.rho_c)) {
    const double abar = res.rho_c * std::pow(state.lambda_beta, state.d);
    if (target > abar * (1.0 + 1e-12)) {
      res.regime = Regime::InfiniteClusters;
      res.mu = mu_bar(state);
      res.infinite_cluster_density = state.rho - res.rho_c;
      return res;
    }
    if (target >= abar * (1.0 - 1e-12)) {
      res.regime = Regime::Critical;
      res.mu = mu_bar(state);
      res.residual = std::abs(series.A(a_max).value - target);
      return res;
    }
  }

  // bracket in the a variable; stay strictly below the convergence radius
  double hi;
  if (std::isfinite(a_max)) {
    hi = a_max * (1.0 - 1e-12);
  } else {
    hi = std::max(2.0 * target, 1.0);
    for (int i = 0; i < 200 && series.A(hi).value < target; ++i) hi *= 2.0;
  }

  // consistency requirement on the weight source: A must increase along the bracket
  double prev = 0.0;
  for (int i = 1; i <= 32; ++i) {
    const double a = hi * i / 32.0;
    const double v = series.A(a).value;
    if (v + 1e-12 * (std::abs(v) + 1.0) < prev)
      throw Error(ErrorKind::Inconsistent,
                  "weight source failed the consistency test: A is not monotone in mu");
    prev = v;
  }

  double lo = 0.0;
  double a_hi_val = series.A(hi).value;
  if (a_hi_val < target) {
    // target sits inside the excluded sliver below the radius: critical
    res.regime = Regime::Critical;
    res.mu = mu_bar(state);
    res.residual = std::abs(a_hi_val - target);
    return res;
  }

  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = series.A(mid).value;
    if (v < target) lo = mid; else hi = mid;
    if (hi - lo <= 1e-17 * hi) break;
  }
  // secant polish inside the final bracket
  double a_star = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double f = series.A(a_star).value - target;
    const double deriv = series.D(a_star) / std::max(a_star, 1e-300);
    if (deriv <= 0.0) break;
    const double next = a_star - f / deriv;
    if (!(next > lo && next < hi)) break;
    a_star = next;
  }

  const double resid = std::abs(series.A(a_star).value - target);
  if (resid > 1e-10 * target)
    throw Error(ErrorKind::Accuracy,
                "density equation residual " + std::to_string(resid) +
                    " exceeds 1e-10 relative");

  res.regime = Regime::FiniteClusters;
  res.mu = (std::log(a_star) + state.rho * state.vhat0) / state.beta;
  res.residual = resid;
  return res;
}

double example_B(double gamma, int d) {
  if (gamma < 0.0) throw Error(ErrorKind::Usage, "example_B needs gamma >= 0");
  const double x = std::exp(-gamma);
  return x + 0.5 * series::alternating_power_sum(0.5 * d, x, 3);
}

double example_dB(double gamma, int d) {
  if (gamma < 0.0) throw Error(ErrorKind::Usage, "example_dB needs gamma >= 0");
  if (d == 1 && gamma == 0.0)
    throw Error(ErrorKind::Usage,
                "dB/dgamma diverges at gamma = 0 in one dimension");
  const double x = std::exp(-gamma);
  const double val = -(x + 0.5 * series::alternating_power_sum(0.5 * d - 1.0, x, 3));
  if (d >= 2 && !(val < 0.0))
    throw Error(ErrorKind::Inconsistent, "dB/dgamma must be negative for d >= 2");
  return val;
}

double f_second_derivative(const ThermoState& state, double mu) {
  if (!state.source) throw Error(ErrorKind::Usage, "thermo state has no weight source");
  const double beps = state.source->beta_epsilon();
  const double a = std::exp(state.beta * mu - state.rho * state.vhat0);
  if (std::isfinite(beps) && a >= std::exp(beps) * (1.0 + 1e-14))
    throw Error(ErrorKind::Usage, "second derivative requires the finite-cluster regime");
  const double denom = SeriesInA{*state.source, state.n_max}.D(a);
  if (!(denom > 0.0))
    throw Error(ErrorKind::Inconsistent,
                "thermodynamic stability violated: sum n q_n a^n is not positive");
  return std::pow(state.lambda_beta, state.d) / (state.beta * denom) +
         state.vhat0 / state.beta;
}

double dp_drho(const ThermoState& state, double mu) {
  return state.rho * f_second_derivative(state, mu);
}

BoundsReport activity_bounds_check(const ThermoState& state, double mu,
                                   const potentials::PairPotential& p) {
  BoundsReport rep;
  rep.activity = std::exp(state.beta * mu);
  rep.lower = state.rho * std::pow(state.lambda_beta, state.d);

  // lower bound requires u >= 0 (spot-checked on a radial grid)
  bool nonneg = true;
  const double scale = p.length_scale();
  for (int i = 1; i <= 64; ++i) {
    if (p.u_radial(0.1 * i * scale) < -1e-12) {
      nonneg = false;
      break;
    }
  }
  rep.lower_checked = nonneg;
  if (!nonneg) rep.notice = "lower bound skipped: u is not nonnegative";

  try {
    // u is beta-absorbed, so beta * int u_physical = int u
    rep.integral_u = potentials::integral_u(p, state.d);
    rep.upper = rep.lower * std::exp(state.rho * rep.integral_u);
  } catch (const Error&) {
    rep.upper_checked = false;
    rep.notice += std::string(rep.notice.empty() ? "" : "; ") +
                  "upper bound skipped: integral of u unavailable";
  }

  rep.pass = true;
  const double slack = 1.0 + 1e-9;
  if (rep.lower_checked && rep.activity * slack < rep.lower) rep.pass = false;
  if (rep.upper_checked && rep.activity > rep.upper * slack) rep.pass = false;
  return rep;
}

}  // namespace dualcluster::thermo

#include "dualcluster/oracle.hpp"

#include <chrono>
#include <cmath>
#include <unordered_map>

#include "dualcluster/errors.hpp"
#include "dualcluster/parallel.hpp"
#include "dualcluster/rng.hpp"

namespace dualcluster::oracle {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_sys(const FiniteSystem& sys) {
  if (!sys.pot) throw Error(ErrorKind::Usage, "finite system needs a potential");
  if (sys.N < 0) throw Error(ErrorKind::Usage, "particle count must be nonnegative");
  if (!(sys.lambda_beta > 0.0)) throw Error(ErrorKind::Usage, "lambda_beta must be positive");
}

double kinetic_prefactor(const FiniteSystem& sys) {
  // L^{dN} / (lambda_beta^{dN} N!)
  double v = std::pow(sys.L() / sys.lambda_beta, sys.d() * sys.N);
  for (int k = 2; k <= sys.N; ++k) v /= k;
  return v;
}

// Periodic table of E_L on the d=1 node grid y = i L/m. Node alignment keeps
// pair differences on the table exactly: y_k - y_j = (k - j) h.
std::vector<double> e_table_1d(const potentials::PeriodizedPotential& pot, int m) {
  std::vector<double> e(static_cast<size_t>(m));
  const double L = pot.L();
  const double h = L / m;
  for (int j = 0; j < m; ++j) {
    const double y = j * h;
    e[static_cast<size_t>(j)] = pot.E_L(std::span<const double>(&y, 1));
  }
  return e;
}

// Normalized relative-coordinate sums S_N / M^{N-1} with the pair factors
// evaluated on the periodic grid: midpoint differences land back on the grid.
double grid_sum_1d(const std::vector<double>& e, int N) {
  const int m = static_cast<int>(e.size());
  auto at = [&](int idx) { return e[static_cast<size_t>(((idx % m) + m) % m)]; };
  double total = 0.0;
  switch (N) {
    case 2:
      for (int j = 0; j < m; ++j) total += e[static_cast<size_t>(j)];
      return total / m;
    case 3:
      for (int j = 0; j < m; ++j) {
        double row = 0.0;
        for (int k = 0; k < m; ++k) row += e[static_cast<size_t>(k)] * at(k - j);
        total += e[static_cast<size_t>(j)] * row;
      }
      return total / (static_cast<double>(m) * m);
    case 4:
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
          const double ejk = e[static_cast<size_t>(j)] * e[static_cast<size_t>(k)] * at(k - j);
          if (ejk == 0.0) continue;
          double row = 0.0;
          for (int l = 0; l < m; ++l) row += e[static_cast<size_t>(l)] * at(l - j) * at(l - k);
          total += ejk * row;
        }
      }
      return total / (static_cast<double>(m) * m * m);
    default:
      throw Error(ErrorKind::Capacity, "grid oracle supports N <= 4");
  }
}

}  // namespace

OracleValue q_direct(const FiniteSystem& sys, const DirectOptions& opts) {
  check_sys(sys);
  const auto t0 = Clock::now();
  OracleValue out;

  if (sys.N == 0) {
    out.value = 1.0;
    out.method = "exact";
    return out;
  }
  if (sys.N == 1) {
    out.value = std::pow(sys.L() / sys.lambda_beta, sys.d());
    out.method = "exact";
    return out;
  }

  if (sys.d() == 1) {
    if (sys.N > 4) throw Error(ErrorKind::Capacity, "direct oracle caps at N = 4 for d = 1");
    int m = opts.resolution;
    if (sys.N == 4) m = std::min(m, 512);  // O(M^3) inner sum
    const auto table = e_table_1d(*sys.pot, m);
    const auto coarse = e_table_1d(*sys.pot, m / 2);
    const double fine_sum = grid_sum_1d(table, sys.N);
    const double coarse_sum = grid_sum_1d(coarse, sys.N);
    const double pref = kinetic_prefactor(sys);
    out.value = pref * fine_sum;
    out.error = std::abs(pref) * std::abs(fine_sum - coarse_sum);
    out.method = "grid{points=" + std::to_string(m) + "}";
    out.seconds = elapsed(t0);
    return out;
  }

  if (sys.d() == 2) {
    if (sys.N == 2) {
      // single relative coordinate: midpoint grid over the cell
      const int m = std::min(opts.resolution, 1024);
      auto mean_E = [&](int points) {
        double acc = 0.0;
        const double h = sys.L() / points;
        for (int i = 0; i < points; ++i) {
          for (int j = 0; j < points; ++j) {
            const double y[2] = {-0.5 * sys.L() + (i + 0.5) * h,
                                 -0.5 * sys.L() + (j + 0.5) * h};
            acc += sys.pot->E_L(std::span<const double>(y, 2));
          }
        }
        return acc / (static_cast<double>(points) * points);
      };
      const double fine = mean_E(m);
      const double coarse = mean_E(m / 2);
      const double pref = kinetic_prefactor(sys);
      out.value = pref * fine;
      out.error = std::abs(pref) * std::abs(fine - coarse);
      out.method = "grid{points=" + std::to_string(m) + "}";
      out.seconds = elapsed(t0);
      return out;
    }
    if (sys.N == 3) {
      // Monte Carlo over two relative coordinates in the cell
      const int batches = std::max(1, opts.batches);
      std::vector<double> batch_mean(static_cast<size_t>(batches), 0.0);
      std::vector<std::uint64_t> batch_count(static_cast<size_t>(batches), 0);
      const double L = sys.L();
      parallel::run_tasks(static_cast<std::uint64_t>(batches), opts.shards,
                          [&](std::uint64_t b) {
        rng::Stream stream(opts.seed, b);
        const std::uint64_t count =
            opts.samples / batches + (b < opts.samples % batches ? 1 : 0);
        double acc = 0.0;
        for (std::uint64_t s = 0; s < count; ++s) {
          double y1[2], y2[2], dy[2];
          for (int c = 0; c < 2; ++c) {
            y1[c] = L * (stream.next_uniform() - 0.5);
            y2[c] = L * (stream.next_uniform() - 0.5);
            dy[c] = y2[c] - y1[c];
          }
          acc += sys.pot->E_L(std::span<const double>(y1, 2)) *
                 sys.pot->E_L(std::span<const double>(y2, 2)) *
                 sys.pot->E_L(std::span<const double>(dy, 2));
        }
        batch_mean[static_cast<size_t>(b)] = count ? acc / count : 0.0;
        batch_count[static_cast<size_t>(b)] = count;
      });
      double mean = 0.0;
      std::uint64_t total = 0;
      for (int b = 0; b < batches; ++b) {
        mean += batch_mean[static_cast<size_t>(b)] * batch_count[static_cast<size_t>(b)];
        total += batch_count[static_cast<size_t>(b)];
      }
      mean /= static_cast<double>(total);
      double var = 0.0;
      for (int b = 0; b < batches; ++b) {
        const double dlt = batch_mean[static_cast<size_t>(b)] - mean;
        var += dlt * dlt;
      }
      const double se = std::sqrt(var / (batches * std::max(1, batches - 1)));
      const double pref = kinetic_prefactor(sys);
      out.value = pref * mean;
      out.error = std::abs(pref) * se;
      out.method = "mc{samples=" + std::to_string(opts.samples) +
                   ",seed=" + std::to_string(opts.seed) + "}";
      out.seconds = elapsed(t0);
      return out;
    }
    throw Error(ErrorKind::Capacity, "direct oracle caps at N = 3 for d = 2");
  }
  throw Error(ErrorKind::Capacity, "direct oracle supports d in {1,2}");
}

OracleValue q_momentum(const FiniteSystem& sys, const MomentumOptions& opts) {
  check_sys(sys);
  const auto t0 = Clock::now();
  OracleValue out;
  out.method = std::string("lattice{zmax=") + std::to_string(opts.zmax) + ",path=" +
               (opts.path == potentials::EhatPath::Quadrature ? "quadrature" : "unfolded") +
               "}";

  if (sys.N == 0) {
    out.value = 1.0;
    return out;
  }
  if (sys.N == 1) {
    out.value = std::pow(sys.L() / sys.lambda_beta, sys.d());
    return out;
  }

  const int d = sys.d();
  // Coefficients memoized on |z|^2; the periodized factor is radial up to
  // folding-sized corrections, which sit below the reported error budget.
  std::unordered_map<long long, double> memo;
  std::unordered_map<long long, double> memo_err;
  auto ehat = [&](long long z2) {
    auto it = memo.find(z2);
    if (it != memo.end()) return it->second;
    potentials::EhatResult r;
    if (d == 1) {
      const int z = static_cast<int>(std::llround(std::sqrt(static_cast<double>(z2))));
      r = sys.pot->e_hat1(z, opts.path, 0.0, opts.points_per_axis);
    } else {
      int zx = static_cast<int>(std::floor(std::sqrt(static_cast<double>(z2)))), zy = -1;
      while (static_cast<long long>(zx) * zx > z2) --zx;
      for (; zx >= 0; --zx) {
        const long long rem = z2 - static_cast<long long>(zx) * zx;
        const int ry = static_cast<int>(std::llround(std::sqrt(static_cast<double>(rem))));
        if (static_cast<long long>(ry) * ry == rem) {
          zy = ry;
          break;
        }
      }
      if (zy < 0) throw Error(ErrorKind::Inconsistent, "lattice norm without representative");
      const int zv[2] = {zx, zy};
      r = sys.pot->e_hat(std::span<const int>(zv, 2), opts.path, 0.0, opts.points_per_axis);
    }
    memo.emplace(z2, r.value);
    memo_err.emplace(z2, r.error_bound);
    return r.value;
  };

  const double pref = kinetic_prefactor(sys);

  if (sys.N == 2) {
    // only z = 0 survives the two constraints
    out.value = pref * ehat(0);
    out.error = std::abs(pref) * memo_err[0];
    out.seconds = elapsed(t0);
    return out;
  }

  if (sys.N == 3) {
    // constraints force (z, -z, z); the full solution lattice is one z per term
    double s = 0.0;
    if (d == 1) {
      s = std::pow(ehat(0), 3);
      for (int z = 1; z <= opts.zmax; ++z)
        s += 2.0 * std::pow(ehat(static_cast<long long>(z) * z), 3);
    } else {
      for (int zx = -opts.zmax; zx <= opts.zmax; ++zx)
        for (int zy = -opts.zmax; zy <= opts.zmax; ++zy)
          s += std::pow(ehat(static_cast<long long>(zx) * zx +
                             static_cast<long long>(zy) * zy), 3);
    }
    // tail from the decay of the transform
    double tail = 0.0;
    for (int k = opts.zmax + 1; k <= opts.zmax + 256; ++k) {
      const double shell = (d == 1 ? 2.0 : 8.0 * k) *
                           std::pow(std::abs(ehat(static_cast<long long>(k) * k)), 3);
      tail += shell;
      if (shell < 1e-22) break;
    }
    out.value = pref * s;
    out.error = std::abs(pref) * (tail + 3.0 * memo_err[0] * std::abs(s));
    out.seconds = elapsed(t0);
    return out;
  }

  if (sys.N == 4) {
    if (!opts.allow_n4)
      throw Error(ErrorKind::Capacity, "momentum oracle at N = 4 is behind the budget flag");
    if (d != 1) throw Error(ErrorKind::Capacity, "momentum oracle at N = 4 supports d = 1");
    // free variables a = z^2_1, b = z^3_1, c = z^3_2; derived values
    // z^4_1 = -a-b, z^4_2 = a-c, z^4_3 = b+c. All lattice points contribute
    // (zero values included): that is the unconstrained solution lattice.
    auto eh = [&](long long z) { return ehat(z * z); };
    double s = 0.0;
    for (long long a = -opts.zmax; a <= opts.zmax; ++a) {
      const double ea = eh(a);
      if (ea == 0.0) continue;
      for (long long b = -opts.zmax; b <= opts.zmax; ++b) {
        const double eb = ea * eh(b) * eh(a + b);
        if (eb == 0.0) continue;
        for (long long c = -opts.zmax; c <= opts.zmax; ++c)
          s += eb * eh(c) * eh(a - c) * eh(b + c);
      }
    }
    // reduced-cutoff difference as the tail estimate
    double s_red = 0.0;
    const long long zr = (3LL * opts.zmax) / 4;
    for (long long a = -zr; a <= zr; ++a) {
      const double ea = eh(a);
      if (ea == 0.0) continue;
      for (long long b = -zr; b <= zr; ++b) {
        const double eb = ea * eh(b) * eh(a + b);
        if (eb == 0.0) continue;
        for (long long c = -zr; c <= zr; ++c)
          s_red += eb * eh(c) * eh(a - c) * eh(b + c);
      }
    }
    out.value = pref * s;
    out.error = std::abs(pref) * (std::abs(s - s_red) + 6.0 * memo_err[0] * std::abs(s));
    out.seconds = elapsed(t0);
    return out;
  }

  throw Error(ErrorKind::Capacity, "momentum oracle caps at N = 4");
}

RecurrenceReport recurrence_residual(const FiniteSystem& sys, const DirectOptions& direct,
                                     const weights::FiniteLOptions& finite_l) {
  check_sys(sys);
  if (sys.N < 1 || sys.N > 4)
    throw Error(ErrorKind::Capacity, "recurrence oracle supports N in 1..4");

  const int d = sys.d();
  const double rho = sys.N / std::pow(sys.L(), d);

  RecurrenceReport rep;
  rep.note = "E-hat(0) factor read as E-hat_L(0) throughout (finite-L derivation)";

  const OracleValue lhs = q_direct(sys, direct);
  rep.lhs = lhs.value;
  rep.lhs_error_rel = lhs.value != 0.0 ? lhs.error / std::abs(lhs.value) : 0.0;

  const double ehat0 =
      sys.pot->e_hat(std::vector<int>(static_cast<size_t>(d), 0),
                     potentials::EhatPath::Quadrature, 0.0, direct.resolution)
          .value;

  double rhs = 0.0;
  double rhs_err = 0.0;
  for (int n = 1; n <= sys.N; ++n) {
    double qn = 0.0;
    double qn_err = 0.0;
    if (n == 1) {
      qn = 1.0;
    } else if (n == 2) {
      continue;
    } else {
      const weights::FiniteLWeight w = weights::q_n_finite_L(n, *sys.pot, sys.lambda_beta, finite_l);
      qn = w.weight.value;
      qn_err = w.tail_bound;
    }
    FiniteSystem rest = sys;
    rest.N = sys.N - n;
    const OracleValue q_rest = q_direct(rest, direct);
    const double factor = std::pow(ehat0, n * (sys.N - n));
    rhs += factor * qn * q_rest.value;
    rhs_err += std::abs(factor) * (std::abs(qn) * q_rest.error + qn_err * std::abs(q_rest.value));
  }
  const double scale = 1.0 / (rho * std::pow(sys.lambda_beta, d));
  rhs *= scale;
  rhs_err *= scale;

  rep.rhs = rhs;
  rep.rhs_error_rel = rhs != 0.0 ? rhs_err / std::abs(rhs) : 0.0;
  rep.residual_rel = std::abs(rep.lhs - rep.rhs) / std::max(std::abs(rep.lhs), 1e-300);
  rep.residual_exceeds_errors =
      rep.residual_rel > 3.0 * (rep.lhs_error_rel + rep.rhs_error_rel) + 1e-14;
  return rep;
}

LimitFactorReport limit_factor_check(int n, double rho,
                                     std::shared_ptr<const potentials::PairPotential> base,
                                     int d, std::span<const double> ladder, double beta,
                                     int quad_points) {
  if (n < 1) throw Error(ErrorKind::Usage, "limit factor needs n >= 1");
  LimitFactorReport rep;
  const double vhat0 = potentials::vhat0(*base, d);
  const double rhs = std::exp(-n * rho * vhat0);
  double prev_gap = std::numeric_limits<double>::infinity();
  for (double L : ladder) {
    const double n_real = rho * std::pow(L, d);
    const int N = static_cast<int>(std::llround(n_real));
    if (std::abs(n_real - N) > 1e-9)
      throw Error(ErrorKind::Usage, "rho L^d must be an integer along the ladder");
    potentials::PeriodizedPotential pot(base, d, L, beta);
    const double ehat0 =
        pot.e_hat(std::vector<int>(static_cast<size_t>(d), 0),
                  potentials::EhatPath::Quadrature, 0.0, quad_points)
            .value;
    LimitFactorRow row;
    row.N = N;
    row.L = L;
    // the factor only arises for clusters that fit, n <= N
    row.lhs = N >= n ? std::pow(ehat0, static_cast<double>(n) * (N - n)) : 1.0;
    row.rhs = rhs;
    row.gap = row.lhs - rhs;
    if (std::abs(row.gap) > prev_gap + 1e-12) rep.gap_monotone = false;
    prev_gap = std::abs(row.gap);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace dualcluster::oracle

#include "dualcluster/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include "dualcluster/errors.hpp"
#include "dualcluster/parallel.hpp"
#include "dualcluster/rng.hpp"

namespace dualcluster::weights {

namespace {

constexpr double kPi = std::numbers::pi;

const potentials::GaussianPotential* as_gaussian(const potentials::PairPotential& p) {
  return dynamic_cast<const potentials::GaussianPotential*>(&p);
}

// Radial profile of vhat_beta, precomputed so Monte Carlo loops stay cheap.
struct VhatBetaProfile {
  bool gaussian = false;
  double amp = 0.0;   // gaussian: amp * exp(-a r^2)
  double a = 0.0;
  std::vector<double> table;  // else: uniform samples on [0, rmax]
  double dr = 0.0;
  double rmax = 0.0;
  double at0 = 0.0;
  double lambda_eff = 0.0;  // gaussian-equivalent width for the proposal

  double operator()(double r) const {
    if (gaussian) return amp * std::exp(-a * r * r);
    if (r >= rmax) return 0.0;
    const double t = r / dr;
    const size_t i = static_cast<size_t>(t);
    if (i + 1 >= table.size()) return table.back();
    const double frac = t - static_cast<double>(i);
    return table[i] * (1.0 - frac) + table[i + 1] * frac;
  }
};

VhatBetaProfile make_profile(const potentials::PairPotential& p, int d, double lambda_beta) {
  VhatBetaProfile prof;
  if (const auto* g = as_gaussian(p)) {
    const double lp = g->lambda() / lambda_beta;
    prof.gaussian = true;
    prof.amp = std::pow(lp, d);
    prof.a = kPi * lp * lp;
    prof.at0 = prof.amp;
    prof.lambda_eff = lp;
    return prof;
  }
  if (!p.supports_numeric_vhat())
    throw Error(ErrorKind::Usage, "unsupported: potential offers no transform route");
  prof.at0 = potentials::vhat_beta(p, d, lambda_beta, 0.0);
  if (prof.at0 == 0.0) {
    // v identically zero: keep an empty profile that evaluates to 0
    prof.rmax = 1.0;
    prof.dr = 1.0;
    prof.table = {0.0, 0.0};
    prof.lambda_eff = 1.0;
    return prof;
  }
  // Locate the half width of |vhat_beta| first, then tabulate out to a
  // fixed multiple of it. Numeric transforms bottom out at quadrature noise,
  // so radius decisions must not chase absolute thresholds into the tail.
  double hi = 0.0625;
  while (std::abs(potentials::vhat_beta(p, d, lambda_beta, hi)) > 0.5 * std::abs(prof.at0) &&
         hi < 256.0)
    hi *= 2.0;
  double lo = hi > 0.0625 ? 0.5 * hi : 0.0;
  for (int it = 0; it < 20; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::abs(potentials::vhat_beta(p, d, lambda_beta, mid)) > 0.5 * std::abs(prof.at0))
      lo = mid;
    else
      hi = mid;
  }
  const double half = std::max(0.5 * (lo + hi), 1e-6);
  prof.rmax = std::min(48.0 * half, 512.0);
  const int points = 2048;
  prof.dr = prof.rmax / points;
  prof.table.resize(static_cast<size_t>(points) + 1);
  for (int i = 0; i <= points; ++i)
    prof.table[static_cast<size_t>(i)] = potentials::vhat_beta(p, d, lambda_beta, i * prof.dr);
  prof.lambda_eff = std::sqrt(std::numbers::ln2 / kPi) / half;
  return prof;
}

void check_cycle_order(int n) {
  if (n < 3) throw Error(ErrorKind::Usage, "cycle weight needs n >= 3");
}

std::uint64_t half_factorial_count(int n) {
  // (n-1)!/2, saturated
  long double v = 0.5L;
  for (int k = 2; k <= n - 1; ++k) v *= k;
  if (v > static_cast<long double>(UINT64_MAX)) return UINT64_MAX;
  return static_cast<std::uint64_t>(v);
}

}  // namespace

BlockWeight g_cycle_exact(int n, const potentials::PairPotential& p, int d,
                          double lambda_beta) {
  check_cycle_order(n);
  BlockWeight w;
  w.mode = BlockMode::CycleExact;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  if (const auto* g = as_gaussian(p)) {
    const double lp = g->lambda() / lambda_beta;
    w.value = sign * std::pow(lp, d * (n - 1)) * std::pow(static_cast<double>(n), -0.5 * d);
    return w;
  }
  if (!p.supports_numeric_vhat())
    throw Error(ErrorKind::Usage, "unsupported: potential offers no transform route");
  // radial quadrature of int vhat_beta^n over R^d
  const VhatBetaProfile prof = make_profile(p, d, lambda_beta);
  const int points = 1 << 15;
  const double h = prof.rmax / points;
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    const double r = (i + 0.5) * h;
    acc += std::pow(r, d - 1) * std::pow(prof(r), n);
  }
  w.value = sign * potentials::sphere_surface(d) * acc * h;
  return w;
}

BlockWeight g_block_gaussian_exact(const graphs::LabeledGraph& block, double lambda,
                                   double lambda_beta, int d) {
  const graphs::CycleBasis basis = graphs::cycle_basis(block);
  const std::int64_t det = exact::determinant(exact::gram(basis.coeff));
  const std::uint64_t trees = graphs::count_spanning_trees(block);
  if (det <= 0 || static_cast<std::uint64_t>(det) != trees)
    throw Error(ErrorKind::Inconsistent,
                "cycle-basis Gram determinant disagrees with the spanning-tree count");
  BlockWeight w;
  w.mode = BlockMode::GaussianExact;
  const double sign = (block.edge_count() % 2 == 0) ? 1.0 : -1.0;
  const double lp = lambda / lambda_beta;
  w.value = sign * std::pow(lp, d * (block.n - 1)) *
            std::pow(static_cast<double>(det), -0.5 * d);
  return w;
}

BlockWeight g_block_mc(const graphs::LabeledGraph& block,
                       const potentials::PairPotential& p, int d, double lambda_beta,
                       const McOptions& mc) {
  const graphs::CycleBasis basis = graphs::cycle_basis(block, mc.basis);
  const int nf = basis.n_free;
  const int m = block.edge_count();
  if (nf * d > mc.dimension_cap)
    throw Error(ErrorKind::Capacity, "free dimension " + std::to_string(nf * d) +
                                         " exceeds the Monte Carlo cap");

  const VhatBetaProfile prof = make_profile(p, d, lambda_beta);
  if (prof.at0 == 0.0) {
    BlockWeight w;
    w.mode = BlockMode::MonteCarlo;
    w.samples = mc.samples;
    w.seed = mc.seed;
    return w;  // vhat_beta == 0 pointwise: the integral is exactly 0
  }

  // Per-cycle proposal width matched to vhat_beta and the cycle length.
  // Overlapping cycles can give the raw diagonal proposal unbounded weight
  // variance, so the widths are inflated until 2 eta^2 G - diag(G) is
  // positive definite (G the basis Gram matrix), which keeps the second
  // moment of the Gaussian-case weights finite.
  const exact::IntMatrix gramm = exact::gram(basis.coeff);
  double eta2 = 1.0;
  {
    auto spd = [&](double e2) {
      // Cholesky probe of 2 e2 G - diag(G)
      std::vector<double> a(static_cast<size_t>(nf) * nf);
      for (int i = 0; i < nf; ++i)
        for (int j = 0; j < nf; ++j)
          a[static_cast<size_t>(i) * nf + j] =
              2.0 * e2 * gramm.at(i, j) - (i == j ? gramm.at(i, i) : 0.0);
      for (int c = 0; c < nf; ++c) {
        double diag = a[static_cast<size_t>(c) * nf + c];
        for (int k = 0; k < c; ++k) diag -= a[static_cast<size_t>(c) * nf + k] * a[static_cast<size_t>(c) * nf + k];
        if (diag <= 1e-9) return false;
        const double root = std::sqrt(diag);
        a[static_cast<size_t>(c) * nf + c] = root;
        for (int r = c + 1; r < nf; ++r) {
          double v = a[static_cast<size_t>(r) * nf + c];
          for (int k = 0; k < c; ++k) v -= a[static_cast<size_t>(r) * nf + k] * a[static_cast<size_t>(c) * nf + k];
          a[static_cast<size_t>(r) * nf + c] = v / root;
        }
      }
      return true;
    };
    while (eta2 < 16.0 && !spd(eta2)) eta2 *= 1.25;
  }
  std::vector<double> sigma(static_cast<size_t>(nf));
  std::vector<double> inv2s2(static_cast<size_t>(nf));
  double log_norm = 0.0;  // log prod (sigma sqrt(2 pi))^d
  for (int j = 0; j < nf; ++j) {
    const double diag = static_cast<double>(gramm.at(j, j));
    sigma[static_cast<size_t>(j)] = std::sqrt(eta2) /
        (prof.lambda_eff * std::sqrt(2.0 * kPi * std::max(diag, 1.0)));
    inv2s2[static_cast<size_t>(j)] = 0.5 / (sigma[static_cast<size_t>(j)] * sigma[static_cast<size_t>(j)]);
    log_norm += d * std::log(sigma[static_cast<size_t>(j)] * std::sqrt(2.0 * kPi));
  }

  const int batches = std::max(1, mc.batches);
  std::vector<double> batch_mean(static_cast<size_t>(batches), 0.0);
  std::vector<double> batch_abs(static_cast<size_t>(batches), 0.0);
  std::vector<double> batch_sq(static_cast<size_t>(batches), 0.0);
  std::vector<std::uint64_t> batch_count(static_cast<size_t>(batches), 0);

  parallel::run_tasks(static_cast<std::uint64_t>(batches), mc.shards, [&](std::uint64_t b) {
    rng::Stream stream(mc.seed, b);
    const std::uint64_t count = mc.samples / batches + (b < mc.samples % batches ? 1 : 0);
    std::vector<double> kappa(static_cast<size_t>(nf) * d);
    std::vector<double> edge(static_cast<size_t>(d));
    double sum = 0.0, sum_abs = 0.0, sum_sq = 0.0;
    for (std::uint64_t s = 0; s < count; ++s) {
      double log_w = log_norm;
      for (int j = 0; j < nf; ++j) {
        for (int c = 0; c < d; ++c) {
          const double x = sigma[static_cast<size_t>(j)] * stream.next_normal();
          kappa[static_cast<size_t>(j) * d + c] = x;
          log_w += x * x * inv2s2[static_cast<size_t>(j)];
        }
      }
      double f = 1.0;
      for (int i = 0; i < m && f != 0.0; ++i) {
        double r2 = 0.0;
        for (int c = 0; c < d; ++c) {
          double comp = 0.0;
          for (int j = 0; j < nf; ++j) {
            const int cij = static_cast<int>(basis.coeff.at(i, j));
            if (cij) comp += cij * kappa[static_cast<size_t>(j) * d + c];
          }
          edge[static_cast<size_t>(c)] = comp;
          r2 += comp * comp;
        }
        f *= prof(std::sqrt(r2));
      }
      const double w = f * std::exp(log_w);
      sum += w;
      sum_abs += std::abs(w);
      sum_sq += w * w;
    }
    batch_mean[static_cast<size_t>(b)] = count ? sum / count : 0.0;
    batch_abs[static_cast<size_t>(b)] = sum_abs;
    batch_sq[static_cast<size_t>(b)] = sum_sq;
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
  int used = 0;
  for (int b = 0; b < batches; ++b) {
    if (!batch_count[static_cast<size_t>(b)]) continue;
    const double dlt = batch_mean[static_cast<size_t>(b)] - mean;
    var += dlt * dlt;
    ++used;
  }
  const double se = used > 1 ? std::sqrt(var / (used * (used - 1.0))) : 0.0;

  // effective sample size guards against a badly mismatched proposal
  double sum_abs = 0.0, sum_sq = 0.0;
  for (int b = 0; b < batches; ++b) {
    sum_abs += batch_abs[static_cast<size_t>(b)];
    sum_sq += batch_sq[static_cast<size_t>(b)];
  }
  if (sum_sq > 0.0) {
    const double ess = sum_abs * sum_abs / sum_sq;
    if (ess < 0.01 * static_cast<double>(total))
      throw Error(ErrorKind::Accuracy,
                  "importance-sampling diagnostics: effective sample size " +
                      std::to_string(ess) + " below 1% of " + std::to_string(total));
  }

  BlockWeight w;
  w.mode = BlockMode::MonteCarlo;
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  w.value = sign * mean;
  w.std_error = se;
  w.samples = mc.samples;
  w.seed = mc.seed;
  return w;
}

namespace {

// Canonical key of a block up to relabeling: the minimal adjacency bitmask
// over vertex permutations. Only used to deduplicate Monte Carlo work, so
// the brute-force search is acceptable at block sizes.
std::uint64_t canonical_mask(const graphs::LabeledGraph& g) {
  const int n = g.n;
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  auto edge_bit = [n](int a, int b) {  // 0-based, a < b
    const int row_start = a * (2 * n - a - 1) / 2;
    return std::uint64_t{1} << (row_start + (b - a - 1));
  };
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t mask = 0;
    for (const auto& e : g.edges) {
      int a = perm[static_cast<size_t>(e.a - 1)], b = perm[static_cast<size_t>(e.b - 1)];
      if (a > b) std::swap(a, b);
      mask |= edge_bit(a, b);
    }
    best = std::min(best, mask);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

struct BlockEvaluator {
  const potentials::PairPotential& p;
  int d;
  double lambda_beta;
  const QnOptions& opts;
  bool gaussian_exact;
  double lambda = 0.0;
  std::map<std::pair<int, std::uint64_t>, BlockWeight> mc_cache;  // (n, canonical mask)

  BlockWeight eval(const graphs::LabeledGraph& block) {
    if (gaussian_exact) return g_block_gaussian_exact(block, lambda, lambda_beta, d);
    const std::pair<int, std::uint64_t> key{block.n, canonical_mask(block)};
    auto it = mc_cache.find(key);
    if (it != mc_cache.end()) return it->second;
    const BlockWeight w = g_block_mc(block, p, d, lambda_beta, opts.mc);
    mc_cache.emplace(key, w);
    return w;
  }
};

}  // namespace

ClusterWeight q_n(int n, const potentials::PairPotential& p, int d, double lambda_beta,
                  const QnOptions& opts) {
  if (n < 1) throw Error(ErrorKind::Usage, "q_n needs n >= 1");
  ClusterWeight out;
  out.n = n;
  out.mode = opts.mode;
  if (n == 1) {
    out.value = 1.0;
    out.graph_count = 1;
    return out;
  }
  if (n == 2) {
    out.value = 0.0;
    out.graph_count = 0;
    return out;
  }

  if (opts.mode == ClusterMode::CyclesOnly) {
    // all (n-1)!/2 cycles share one weight by relabeling invariance
    const BlockWeight cyc = g_cycle_exact(n, p, d, lambda_beta);
    out.value = 0.5 * cyc.value;
    out.error = 0.5 * cyc.std_error;
    out.graph_count = half_factorial_count(n);
    return out;
  }

  const auto* gauss = as_gaussian(p);
  const bool gaussian_exact = !opts.force_mc && gauss != nullptr;
  BlockEvaluator eval{p, d, lambda_beta, opts, gaussian_exact,
                      gaussian_exact ? gauss->lambda() : 0.0, {}};

  graphs::EnumerateOptions eopts;
  eopts.ceiling = opts.ceiling;
  const std::vector<graphs::LabeledGraph> family = graphs::all_valid(n, eopts);

  const std::uint64_t todo =
      opts.budget ? std::min<std::uint64_t>(opts.budget, family.size()) : family.size();

  // Pass 1: per-graph block weights through the (possibly cached) evaluator.
  // The Monte Carlo cache is filled sequentially to stay deterministic; the
  // Gaussian-exact route is pure and cheap, so it parallelizes per chunk.
  std::vector<double> gvalue(family.size(), 0.0);
  std::vector<double> gerror(family.size(), 0.0);

  auto weigh_graph = [&](std::uint64_t gi, BlockEvaluator& ev) {
    const graphs::BlockTree tree = graphs::block_decomposition(family[static_cast<size_t>(gi)]);
    double prod = 1.0;
    double rel_err = 0.0;
    for (const auto& blk : tree.blocks) {
      const BlockWeight bw = ev.eval(blk.graph);
      prod *= bw.value;
      if (bw.std_error > 0.0 && bw.value != 0.0)
        rel_err += bw.std_error / std::abs(bw.value);
    }
    gvalue[static_cast<size_t>(gi)] = prod;
    gerror[static_cast<size_t>(gi)] = std::abs(prod) * rel_err;
  };

  if (gaussian_exact) {
    parallel::run_tasks(todo, opts.shards, [&](std::uint64_t gi) { weigh_graph(gi, eval); });
  } else {
    for (std::uint64_t gi = 0; gi < todo; ++gi) weigh_graph(gi, eval);
  }

  if (todo < family.size())
    throw BudgetExhausted("q_n budget exhausted after " + std::to_string(todo) + " of " +
                              std::to_string(family.size()) + " graphs",
                          todo);

  double inv_fact = 1.0;
  for (int k = 2; k <= n - 1; ++k) inv_fact /= k;
  double sum = 0.0, err = 0.0;
  for (std::uint64_t gi = 0; gi < todo; ++gi) {
    sum += gvalue[static_cast<size_t>(gi)];
    err += gerror[static_cast<size_t>(gi)];
  }
  out.value = sum * inv_fact;
  out.error = err * inv_fact;
  out.graph_count = family.size();
  return out;
}

FiniteLWeight q_n_finite_L(int n, const potentials::PeriodizedPotential& pot,
                           double lambda_beta, const FiniteLOptions& opts) {
  if (n < 1) throw Error(ErrorKind::Usage, "q_n_finite_L needs n >= 1");
  FiniteLWeight out;
  out.weight.n = n;
  out.weight.mode = ClusterMode::FiniteL;
  if (n == 1) {
    out.weight.value = 1.0;
    out.weight.graph_count = 1;
    return out;
  }
  if (n == 2) return out;
  if (n > 4)
    throw Error(ErrorKind::Usage, "finite-volume weights are supported for n in {3,4}");

  const int d = pot.dim();
  const double L = pot.L();

  // Fourier table, symmetric and isotropic: memoized on |z|^2.
  std::unordered_map<long long, double> ehat_by_z2;
  auto ehat = [&](long long z2) {
    auto it = ehat_by_z2.find(z2);
    if (it != ehat_by_z2.end()) return it->second;
    double val = 0.0;
    if (d == 1) {
      const int z = static_cast<int>(std::llround(std::sqrt(static_cast<double>(z2))));
      val = pot.e_hat1(z, opts.path, 0.0, opts.points_per_axis).value;
    } else {
      // memoized on |z|^2: exact for the unfolded path; for the quadrature
      // path the residual anisotropy of E_L is folding-sized (negligible at
      // the box sizes accepted here). z2 arrived as a sum of two squares,
      // so the scan always terminates.
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
      if (zy < 0)
        throw Error(ErrorKind::Inconsistent, "lattice norm without representative");
      const int zv[2] = {zx, zy};
      val = pot.e_hat(std::span<const int>(zv, 2), opts.path, 0.0, opts.points_per_axis).value;
    }
    ehat_by_z2.emplace(z2, val);
    return val;
  };
  const double ehat0 = ehat(0);

  // sum over |z|_inf > zmax of |E-hat|, for the tail bound
  auto tail_abs_sum = [&]() {
    double t = 0.0;
    for (int k = opts.zmax + 1; k <= opts.zmax + 512; ++k) {
      double shell = 0.0;
      if (d == 1) {
        shell = 2.0 * std::abs(ehat(static_cast<long long>(k) * k));
      } else {
        // ring of the square lattice at sup-norm k; bound each entry by the
        // value at the nearest point (|z| >= k)
        shell = 8.0 * k * std::abs(ehat(static_cast<long long>(k) * k));
      }
      t += shell;
      if (shell < 1e-22) break;
    }
    return t;
  };
  // sum over all z of |E-hat|, bounding the in-box factors
  auto total_abs_sum = [&]() {
    double t = 0.0;
    for (int k = 0; k <= opts.zmax + 512; ++k) {
      double shell = 0.0;
      if (d == 1) {
        shell = (k == 0 ? 1.0 : 2.0) * std::abs(ehat(static_cast<long long>(k) * k));
      } else {
        shell = (k == 0 ? 1.0 : 8.0 * k) * std::abs(ehat(static_cast<long long>(k) * k));
      }
      t += shell;
      if (k > 0 && shell < 1e-22) break;
    }
    return t;
  };

  graphs::EnumerateOptions eopts;
  const std::vector<graphs::LabeledGraph> family = graphs::all_valid(n, eopts);

  const double tail_one = tail_abs_sum();
  const double tail_all = total_abs_sum();

  const int side = 2 * opts.zmax + 1;
  double qsum = 0.0;
  double tail = 0.0;

  for (const auto& g : family) {
    const graphs::CycleBasis basis = graphs::cycle_basis(g);
    const int nf = basis.n_free;
    const int m = g.edge_count();

    double terms = 1.0;
    for (int i = 0; i < nf * d; ++i) terms *= side;
    if (terms > static_cast<double>(opts.term_budget))
      throw Error(ErrorKind::Capacity,
                  "finite-L lattice sum needs " + std::to_string(terms) +
                      " points; reduce zmax or the order");

    const double slack_power = n * (n - 1) / 2 - m;  // exponent of E-hat(0)
    const double slack = std::pow(ehat0, slack_power);

    // odometer over the free variables, one d-vector each
    std::vector<int> f(static_cast<size_t>(nf) * d, -opts.zmax);
    double graph_sum = 0.0;
    for (;;) {
      double prod = 1.0;
      for (int i = 0; i < m && prod != 0.0; ++i) {
        long long z2 = 0;
        bool zero = true;
        for (int c = 0; c < d; ++c) {
          long long comp = 0;
          for (int j = 0; j < nf; ++j) {
            const auto cij = basis.coeff.at(i, j);
            if (cij) comp += cij * f[static_cast<size_t>(j) * d + c];
          }
          zero = zero && comp == 0;
          z2 += comp * comp;
        }
        if (zero) {
          prod = 0.0;
          break;
        }
        prod *= ehat(z2);
      }
      graph_sum += prod;
      size_t c = 0;
      while (c < f.size() && ++f[c] > opts.zmax) f[c++] = -opts.zmax;
      if (c == f.size()) break;
    }
    qsum += slack * graph_sum;
    // any excluded term has some free variable out of the box; that variable
    // is itself a non-tree edge value, the rest is bounded by the total sums
    tail += std::abs(slack) * nf * tail_one * std::pow(tail_all, nf - 1);
  }

  double inv_fact = 1.0;
  for (int k = 2; k <= n - 1; ++k) inv_fact /= k;
  const double prefactor = std::pow(L / lambda_beta, d * (n - 1)) * inv_fact;
  out.weight.value = prefactor * qsum;
  out.weight.graph_count = family.size();
  out.tail_bound = std::abs(prefactor) * tail;
  out.weight.error = out.tail_bound;
  if (opts.tail_tol > 0.0 && out.tail_bound > opts.tail_tol)
    throw Error(ErrorKind::Accuracy,
                "finite-L tail bound " + std::to_string(out.tail_bound) +
                    " exceeds tolerance; increase zmax");
  return out;
}

AsymptoticEstimate estimate_asymptotics(std::span<const ClusterWeight> weights, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::Usage, "asymptotics need beta > 0");
  AsymptoticEstimate est;
  std::vector<double> xs, ys;
  for (const auto& w : weights) {
    if (w.n < 3) continue;
    if (w.value == 0.0) {
      est.skipped.push_back(w.n);
      continue;
    }
    est.orders.push_back(w.n);
    est.alpha.push_back(w.value > 0.0 ? 1 : -1);
    const double y = -std::log(std::abs(w.value)) / w.n;
    ys.push_back(y);
    xs.push_back(1.0 / w.n);
  }
  if (xs.size() < 3)
    throw Error(ErrorKind::Usage, "asymptotic estimate needs at least 3 nonzero weights");

  // Least-squares line y = a + b x with x = 1/n; the intercept extrapolates
  // 1/n -> 0. When enough orders are available, only the large-n half enters
  // the fit: that is where the asymptotic representation starts to hold.
  size_t first = 0;
  if (xs.size() >= 8) first = xs.size() / 2;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double npts = static_cast<double>(xs.size() - first);
  for (size_t i = first; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = npts * sxx - sx * sx;
  const double slope = (npts * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / npts;

  est.beta_epsilon = intercept;
  est.beta_delta.resize(est.orders.size());
  for (size_t i = 0; i < est.orders.size(); ++i)
    est.beta_delta[i] = ys[i] - intercept;
  return est;
}

}  // namespace dualcluster::weights

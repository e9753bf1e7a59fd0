#include "dualcluster.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "dualcluster/errors.hpp"
#include "dualcluster/graphs.hpp"
#include "dualcluster/momentum.hpp"
#include "dualcluster/oracle.hpp"
#include "dualcluster/potentials.hpp"
#include "dualcluster/rng.hpp"
#include "dualcluster/thermo.hpp"
#include "dualcluster/weights.hpp"

using namespace dualcluster;

struct dc_potential {
  std::shared_ptr<const potentials::PairPotential> p;
};

namespace {

thread_local std::string g_last_error;

dc_status fail(dc_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

dc_status from_error(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Usage: return fail(DC_ERR_USAGE, e.what());
    case ErrorKind::Capacity: return fail(DC_ERR_CAPACITY, e.what());
    case ErrorKind::Accuracy: return fail(DC_ERR_ACCURACY, e.what());
    case ErrorKind::Inconsistent: return fail(DC_ERR_INCONSISTENT, e.what());
    case ErrorKind::Infeasible: return fail(DC_ERR_INCONSISTENT, e.what());
    case ErrorKind::Io: return fail(DC_ERR_IO, e.what());
  }
  return fail(DC_ERR_INTERNAL, e.what());
}

template <typename Fn>
dc_status guarded(Fn&& fn) {
  try {
    fn();
    return DC_OK;
  } catch (const Error& e) {
    return from_error(e);
  } catch (const std::exception& e) {
    return fail(DC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DC_ERR_INTERNAL, "unknown failure");
  }
}

const potentials::PairPotential& deref(const dc_potential* p) {
  if (!p || !p->p) throw Error(ErrorKind::Usage, "null potential handle");
  return *p->p;
}

// Builds the thermo weight source selected by weight_mode.
std::unique_ptr<thermo::WeightSource> make_source(const potentials::PairPotential& p,
                                                  int d, double lambda_beta,
                                                  int weight_mode, int n_max,
                                                  uint64_t samples, uint64_t seed,
                                                  int shards) {
  if (dynamic_cast<const potentials::ZeroPotential*>(&p))
    return std::make_unique<thermo::IdealGasSource>();
  if (weight_mode == 1) {
    if (const auto* g = dynamic_cast<const potentials::GaussianPotential*>(&p))
      return std::make_unique<thermo::CyclesOnlyGaussianSource>(d, g->lambda(), lambda_beta);
  }
  if (n_max < 5) throw Error(ErrorKind::Usage, "weight table needs n_max >= 5");
  weights::QnOptions opts;
  opts.mode = weight_mode == 1 ? weights::ClusterMode::CyclesOnly : weights::ClusterMode::Full;
  opts.mc.samples = samples;
  opts.mc.seed = seed;
  opts.mc.shards = shards;
  opts.shards = shards;
  std::vector<weights::ClusterWeight> table;
  table.reserve(static_cast<size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) table.push_back(weights::q_n(n, p, d, lambda_beta, opts));
  return std::make_unique<thermo::TableSource>(std::move(table), 1.0);
}

thermo::ThermoState make_state(const potentials::PairPotential& p, int d,
                               double lambda_beta, double rho,
                               const thermo::WeightSource* src, int n_max) {
  thermo::ThermoState st;
  st.rho = rho;
  st.beta = 1.0;
  st.lambda_beta = lambda_beta;
  st.d = d;
  st.vhat0 = potentials::vhat0(p, d);
  st.source = src;
  st.n_max = n_max;
  return st;
}

void fill_solve_row(dc_solve_row& row, const potentials::PairPotential& p,
                    const thermo::ThermoState& st) {
  const thermo::SolveResult res = thermo::solve_mu(st);
  row.rho = st.rho;
  row.mu = res.mu;
  row.regime = res.regime == thermo::Regime::FiniteClusters ? 0
               : res.regime == thermo::Regime::Critical     ? 1
                                                            : 2;
  row.residual = res.residual;
  row.rho_c = res.rho_c;
  row.excess = res.infinite_cluster_density;
  if (res.regime == thermo::Regime::FiniteClusters) {
    row.d2f_drho2 = thermo::f_second_derivative(st, res.mu);
    row.dp_drho = st.rho * row.d2f_drho2;
  } else {
    row.d2f_drho2 = std::nan("");
    row.dp_drho = std::nan("");
  }
  const thermo::BoundsReport rep = thermo::activity_bounds_check(st, res.mu, p);
  row.bound_lower = rep.lower;
  row.bound_upper = rep.upper_checked ? rep.upper : std::nan("");
  row.activity = rep.activity;
  row.bounds_pass = rep.pass ? 1 : 0;
}

}  // namespace

extern "C" {

const char* dc_version(void) { return "0.1.0"; }

const char* dc_last_error(void) { return g_last_error.c_str(); }

dc_status dc_potential_gaussian(double lambda, dc_potential** out) {
  return guarded([&] {
    if (!out) throw Error(ErrorKind::Usage, "null output pointer");
    *out = new dc_potential{std::make_shared<potentials::GaussianPotential>(lambda)};
  });
}

dc_status dc_potential_zero(dc_potential** out) {
  return guarded([&] {
    if (!out) throw Error(ErrorKind::Usage, "null output pointer");
    *out = new dc_potential{std::make_shared<potentials::ZeroPotential>()};
  });
}

dc_status dc_potential_tabulated(const char* path, double eta, double R, double c,
                                 dc_potential** out) {
  return guarded([&] {
    if (!out || !path) throw Error(ErrorKind::Usage, "null argument");
    potentials::Temperedness t{eta, R, c};
    *out = new dc_potential{std::make_shared<potentials::TabulatedPotential>(
        potentials::TabulatedPotential::from_file(path, t))};
  });
}

void dc_potential_free(dc_potential* p) { delete p; }

dc_status dc_potential_mayer_v(const dc_potential* p, double beta, int d,
                               const double* x, double* out) {
  return guarded([&] {
    if (!x || !out) throw Error(ErrorKind::Usage, "null argument");
    *out = potentials::mayer_v(deref(p), beta, std::span<const double>(x, static_cast<size_t>(d)));
  });
}

dc_status dc_potential_vhat(const dc_potential* p, int d, double kappa, double* out) {
  return guarded([&] {
    if (!out) throw Error(ErrorKind::Usage, "null argument");
    *out = potentials::fourier_vhat_radial(deref(p), d, kappa);
  });
}

dc_status dc_potential_vhat0(const dc_potential* p, int d, double* out) {
  return guarded([&] {
    if (!out) throw Error(ErrorKind::Usage, "null argument");
    *out = potentials::vhat0(deref(p), d);
  });
}

dc_status dc_atlas_count(int n, int ceiling, int shards, uint64_t* count) {
  return guarded([&] {
    if (!count) throw Error(ErrorKind::Usage, "null argument");
    graphs::EnumerateOptions opts;
    if (ceiling > 0) opts.ceiling = ceiling;
    opts.shards = shards;
    *count = graphs::count_valid(n, opts);
  });
}

dc_status dc_atlas_write(int n, int ceiling, uint64_t limit, const char* path,
                         uint64_t* count_out) {
  return guarded([&] {
    if (!path) throw Error(ErrorKind::Usage, "null path");
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, std::string("cannot open ") + path);
    graphs::EnumerateOptions opts;
    if (ceiling > 0) opts.ceiling = ceiling;
    opts.limit = limit;
    uint64_t count = 0;
    graphs::enumerate_valid(n, opts, [&](const graphs::LabeledGraph& g) {
      out << graphs::to_line(g) << '\n';
      ++count;
      return static_cast<bool>(out);
    });
    if (!out) throw Error(ErrorKind::Io, std::string("write failed for ") + path);
    if (count_out) *count_out = count;
  });
}

dc_status dc_atlas_stream(int n, int ceiling, uint64_t limit, dc_atlas_callback cb,
                          void* ctx, uint64_t* count_out) {
  return guarded([&] {
    if (!cb) throw Error(ErrorKind::Usage, "null callback");
    graphs::EnumerateOptions opts;
    if (ceiling > 0) opts.ceiling = ceiling;
    opts.limit = limit;
    uint64_t count = 0;
    graphs::enumerate_valid(n, opts, [&](const graphs::LabeledGraph& g) {
      ++count;
      return cb(graphs::to_line(g).c_str(), ctx) != 0;
    });
    if (count_out) *count_out = count;
  });
}

dc_status dc_cycle_count(int n, int ceiling, uint64_t* count) {
  return guarded([&] {
    if (!count) throw Error(ErrorKind::Usage, "null argument");
    graphs::EnumerateOptions opts;
    if (ceiling > 0) opts.ceiling = ceiling;
    *count = graphs::all_cycles(n, opts).size();
  });
}

dc_status dc_lemma_check(int n_max, uint64_t trials, uint64_t seed, int dim,
                         const char* dump_path, dc_lemma_report* out) {
  return guarded([&] {
    if (!out) throw Error(ErrorKind::Usage, "null argument");
    if (n_max < 3) throw Error(ErrorKind::Usage, "lemma check needs n_max >= 3");
    if (n_max > graphs::kDefaultCeiling)
      throw Error(ErrorKind::Capacity, "lemma check samples up to the order ceiling " +
                                           std::to_string(graphs::kDefaultCeiling));
    *out = dc_lemma_report{};
    std::ofstream dump;
    if (dump_path) {
      dump.open(dump_path);
      if (!dump) throw Error(ErrorKind::Io, std::string("cannot open ") + dump_path);
    }

    rng::Stream pick(seed, 0xA11CE);
    for (uint64_t t = 0; t < trials; ++t) {
      const int n = 3 + static_cast<int>(pick.next_below(static_cast<uint64_t>(n_max - 2)));
      const graphs::LabeledGraph g = graphs::sample_valid(n, pick);
      const auto a = momentum::construct_assignment(g, dim, seed + t);
      bool zero_vec = false;
      for (const auto& v : a.vectors) {
        bool all0 = true;
        for (auto c : v) all0 = all0 && c == 0;
        zero_vec = zero_vec || all0;
      }
      if (zero_vec) ++out->zero_edge_vectors;
      bool sums_ok = true;
      for (int k = 1; k <= g.n; ++k) {
        for (auto c : momentum::vertex_sum(a, k)) sums_ok = sums_ok && c == 0;
      }
      if (!sums_ok) ++out->constraint_violations;
      ++out->valid_graphs_checked;
      if (dump && t < 8) dump << graphs::to_line(g) << "\n" << momentum::to_dump(a) << "\n";
    }

    // bridged graphs must be rejected with a certificate
    rng::Stream pick2(seed, 0xB41D6E);
    uint64_t rejected = 0;
    uint64_t wanted = trials;
    for (uint64_t attempts = 0; rejected < wanted && attempts < wanted * 10000; ++attempts) {
      const int n = 3 + static_cast<int>(pick2.next_below(static_cast<uint64_t>(n_max - 2)));
      const int m = n * (n - 1) / 2;
      const uint64_t mask = pick2.next_u64() & ((1ULL << m) - 1);
      graphs::LabeledGraph g;
      g.n = n;
      int bit = 0;
      for (int a2 = 1; a2 <= n; ++a2)
        for (int b2 = a2 + 1; b2 <= n; ++b2, ++bit)
          if (mask >> bit & 1) g.edges.push_back({a2, b2});
      if (!graphs::spanning_connected(g) || g.edges.empty()) continue;
      if (!graphs::find_bridge(g)) continue;
      const auto cert = momentum::certify_infeasible(g);
      if (cert) {
        ++rejected;
      } else {
        ++out->missed_bridges;
      }
      bool threw = false;
      try {
        (void)momentum::construct_assignment(g, dim, seed);
      } catch (const Error& e) {
        threw = e.kind() == ErrorKind::Infeasible;
      }
      if (!threw) ++out->missed_bridges;
    }
    out->bridged_graphs_rejected = rejected;
    if (out->constraint_violations || out->zero_edge_vectors || out->missed_bridges)
      throw Error(ErrorKind::Inconsistent, "lemma check found violations");
  });
}

dc_status dc_qn_table(const dc_potential* p, int d, double lambda_beta, int n_max,
                      int mode, int force_mc, uint64_t samples, uint64_t seed,
                      int shards, uint64_t budget, int ceiling, dc_weight_row* rows) {
  return guarded([&] {
    if (!rows) throw Error(ErrorKind::Usage, "null argument");
    if (n_max < 1) throw Error(ErrorKind::Usage, "n_max must be positive");
    const auto& pot = deref(p);
    weights::QnOptions opts;
    opts.mode = mode == 1 ? weights::ClusterMode::CyclesOnly : weights::ClusterMode::Full;
    opts.budget = budget;
    opts.mc.samples = samples;
    opts.mc.seed = seed;
    opts.mc.shards = shards;
    opts.shards = shards;
    opts.force_mc = force_mc != 0;
    if (ceiling > 0) opts.ceiling = ceiling;
    for (int n = 1; n <= n_max; ++n) {
      const weights::ClusterWeight w = weights::q_n(n, pot, d, lambda_beta, opts);
      rows[n - 1].n = n;
      rows[n - 1].value = w.value;
      rows[n - 1].error = w.error;
      rows[n - 1].graphs = w.graph_count;
      rows[n - 1].mode = mode;
    }
  });
}

dc_status dc_critical_density(const dc_potential* p, int d, double lambda_beta,
                              int weight_mode, int n_max, uint64_t samples,
                              uint64_t seed, int shards, double* out) {
  return guarded([&] {
    if (!out) throw Error(ErrorKind::Usage, "null argument");
    const auto& pot = deref(p);
    const auto src = make_source(pot, d, lambda_beta, weight_mode, n_max, samples, seed, shards);
    *out = thermo::rho_c(*src, lambda_beta, d);
  });
}

dc_status dc_solve(const dc_potential* p, int d, double lambda_beta, double rho,
                   int weight_mode, int n_max, uint64_t samples, uint64_t seed,
                   int shards, dc_solve_row* out) {
  return guarded([&] {
    if (!out) throw Error(ErrorKind::Usage, "null argument");
    const auto& pot = deref(p);
    const auto src = make_source(pot, d, lambda_beta, weight_mode, n_max, samples, seed, shards);
    const auto st = make_state(pot, d, lambda_beta, rho, src.get(), std::max(n_max, 64));
    fill_solve_row(*out, pot, st);
  });
}

dc_status dc_sweep(const dc_potential* p, int d, double lambda_beta,
                   const double* rho_values, size_t count, int weight_mode, int n_max,
                   uint64_t samples, uint64_t seed, int shards, dc_solve_row* rows) {
  return guarded([&] {
    if (!rows || !rho_values) throw Error(ErrorKind::Usage, "null argument");
    const auto& pot = deref(p);
    const auto src = make_source(pot, d, lambda_beta, weight_mode, n_max, samples, seed, shards);
    for (size_t i = 0; i < count; ++i) {
      const auto st =
          make_state(pot, d, lambda_beta, rho_values[i], src.get(), std::max(n_max, 64));
      fill_solve_row(rows[i], pot, st);
    }
  });
}

dc_status dc_oracle_direct(const dc_potential* p, int d, int N, double L, double beta,
                           double lambda_beta, int resolution, uint64_t samples,
                           uint64_t seed, int shards, dc_oracle_result* out) {
  return guarded([&] {
    if (!out) throw Error(ErrorKind::Usage, "null argument");
    potentials::PeriodizedPotential pot(
        std::shared_ptr<const potentials::PairPotential>(&deref(p), [](auto*) {}), d, L, beta);
    oracle::FiniteSystem sys{N, lambda_beta, &pot};
    oracle::DirectOptions opts;
    if (resolution > 0) opts.resolution = resolution;
    if (samples > 0) opts.samples = samples;
    opts.seed = seed;
    opts.shards = shards;
    const oracle::OracleValue v = oracle::q_direct(sys, opts);
    out->value = v.value;
    out->error = v.error;
    out->seconds = v.seconds;
    std::snprintf(out->method, sizeof out->method, "%s", v.method.c_str());
  });
}

dc_status dc_oracle_momentum(const dc_potential* p, int d, int N, double L, double beta,
                             double lambda_beta, int zmax, int quadrature, int allow_n4,
                             dc_oracle_result* out) {
  return guarded([&] {
    if (!out) throw Error(ErrorKind::Usage, "null argument");
    potentials::PeriodizedPotential pot(
        std::shared_ptr<const potentials::PairPotential>(&deref(p), [](auto*) {}), d, L, beta);
    oracle::FiniteSystem sys{N, lambda_beta, &pot};
    oracle::MomentumOptions opts;
    if (zmax > 0) opts.zmax = zmax;
    opts.path = quadrature ? potentials::EhatPath::Quadrature : potentials::EhatPath::Unfolded;
    opts.allow_n4 = allow_n4 != 0;
    const oracle::OracleValue v = oracle::q_momentum(sys, opts);
    out->value = v.value;
    out->error = v.error;
    out->seconds = v.seconds;
    std::snprintf(out->method, sizeof out->method, "%s", v.method.c_str());
  });
}

dc_status dc_oracle_recurrence(const dc_potential* p, int d, int N, double L,
                               double beta, double lambda_beta, int resolution,
                               int zmax, dc_recurrence_report* out) {
  return guarded([&] {
    if (!out) throw Error(ErrorKind::Usage, "null argument");
    potentials::PeriodizedPotential pot(
        std::shared_ptr<const potentials::PairPotential>(&deref(p), [](auto*) {}), d, L, beta);
    oracle::FiniteSystem sys{N, lambda_beta, &pot};
    oracle::DirectOptions direct;
    if (resolution > 0) direct.resolution = resolution;
    weights::FiniteLOptions fl;
    if (zmax > 0) fl.zmax = zmax;
    const oracle::RecurrenceReport rep = oracle::recurrence_residual(sys, direct, fl);
    out->lhs = rep.lhs;
    out->rhs = rep.rhs;
    out->residual_rel = rep.residual_rel;
    out->lhs_error_rel = rep.lhs_error_rel;
    out->rhs_error_rel = rep.rhs_error_rel;
    out->residual_exceeds_errors = rep.residual_exceeds_errors ? 1 : 0;
    std::snprintf(out->note, sizeof out->note, "%s", rep.note.c_str());
  });
}

dc_status dc_oracle_limit_factor(const dc_potential* p, int d, int n, double rho,
                                 const double* ladder, size_t count, double beta,
                                 dc_limit_factor_row* rows, int* gap_monotone) {
  return guarded([&] {
    if (!rows || !ladder) throw Error(ErrorKind::Usage, "null argument");
    const auto& pot = deref(p);
    auto alias = std::shared_ptr<const potentials::PairPotential>(&pot, [](auto*) {});
    const oracle::LimitFactorReport rep = oracle::limit_factor_check(
        n, rho, alias, d, std::span<const double>(ladder, count), beta);
    for (size_t i = 0; i < rep.rows.size() && i < count; ++i) {
      rows[i].N = rep.rows[i].N;
      rows[i].L = rep.rows[i].L;
      rows[i].lhs = rep.rows[i].lhs;
      rows[i].rhs = rep.rows[i].rhs;
      rows[i].gap = rep.rows[i].gap;
    }
    if (gap_monotone) *gap_monotone = rep.gap_monotone ? 1 : 0;
  });
}

}  // extern "C"

/*
 * dualcluster: momentum-coupling cluster expansion for classical pair
 * potentials. C API over the core library: opaque handles, integer status
 * codes, plain structs. All functions return dc_status; on failure
 * dc_last_error() describes what went wrong (thread-local).
 *
 * Conventions: energies are beta-absorbed (u already contains the inverse
 * temperature), so the remaining temperature dependence enters through the
 * thermal wavelength lambda_beta.
 */
#ifndef DUALCLUSTER_H
#define DUALCLUSTER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dc_status {
  DC_OK = 0,
  DC_ERR_USAGE = 2,        /* bad arguments, domain errors, unsupported */
  DC_ERR_CAPACITY = 3,     /* over a configured ceiling or budget */
  DC_ERR_ACCURACY = 4,     /* tolerance cannot be met */
  DC_ERR_INCONSISTENT = 5, /* cross-checks or consistency tests failed */
  DC_ERR_IO = 6,
  DC_ERR_INTERNAL = 7
} dc_status;

const char* dc_version(void);
const char* dc_last_error(void);

/* ---------- potentials ---------- */

typedef struct dc_potential dc_potential;

dc_status dc_potential_gaussian(double lambda, dc_potential** out);
dc_status dc_potential_zero(dc_potential** out);
/* two whitespace-separated columns (r, u), ascending r; (eta, R, c) is the
 * temperedness metadata |u| <= c r^-eta beyond R */
dc_status dc_potential_tabulated(const char* path, double eta, double R, double c,
                                 dc_potential** out);
void dc_potential_free(dc_potential* p);

dc_status dc_potential_mayer_v(const dc_potential* p, double beta, int d,
                               const double* x, double* out);
dc_status dc_potential_vhat(const dc_potential* p, int d, double kappa, double* out);
dc_status dc_potential_vhat0(const dc_potential* p, int d, double* out);

/* ---------- graph atlas ---------- */

dc_status dc_atlas_count(int n, int ceiling, int shards, uint64_t* count);
/* one graph per line, "n;a-b,a-b,..." in canonical order; limit 0 = all */
dc_status dc_atlas_write(int n, int ceiling, uint64_t limit, const char* path,
                         uint64_t* count_out);
/* streaming variant: the callback receives each line (no newline) and
 * returns nonzero to continue, zero to stop early */
typedef int (*dc_atlas_callback)(const char* line, void* ctx);
dc_status dc_atlas_stream(int n, int ceiling, uint64_t limit, dc_atlas_callback cb,
                          void* ctx, uint64_t* count_out);
dc_status dc_cycle_count(int n, int ceiling, uint64_t* count);

/* ---------- momentum lemma check ---------- */

typedef struct dc_lemma_report {
  uint64_t valid_graphs_checked;
  uint64_t bridged_graphs_rejected;
  uint64_t constraint_violations; /* must stay 0 */
  uint64_t zero_edge_vectors;     /* must stay 0 */
  uint64_t missed_bridges;        /* must stay 0 */
} dc_lemma_report;

/* samples `trials` valid graphs with 3 <= n <= n_max, builds integer edge
 * momenta and verifies every vertex sum; also samples bridged graphs and
 * asserts certified rejection. dump_path (may be NULL): a few assignments in
 * the "i-j: (c1,...,cd)" format. */
dc_status dc_lemma_check(int n_max, uint64_t trials, uint64_t seed, int dim,
                         const char* dump_path, dc_lemma_report* out);

/* ---------- cluster weights ---------- */

typedef struct dc_weight_row {
  int n;
  double value;
  double error;
  uint64_t graphs;
  int mode; /* 0 full, 1 cycles-only */
} dc_weight_row;

/* rows must hold n_max entries (n = 1..n_max). mode: 0 full, 1 cycles-only. */
dc_status dc_qn_table(const dc_potential* p, int d, double lambda_beta, int n_max,
                      int mode, int force_mc, uint64_t samples, uint64_t seed,
                      int shards, uint64_t budget, int ceiling, dc_weight_row* rows);

/* ---------- thermodynamics ---------- */

typedef struct dc_solve_row {
  double rho;
  double mu;
  int regime; /* 0 finite-clusters, 1 critical, 2 infinite-clusters */
  double residual;
  double rho_c;
  double excess;     /* density carried by infinite clusters */
  double d2f_drho2;  /* NaN outside the finite-cluster regime */
  double dp_drho;    /* NaN outside the finite-cluster regime */
  double bound_lower;
  double bound_upper;
  double activity;
  int bounds_pass;
} dc_solve_row;

/* weight_mode: 1 cycles-only (closed form for the gaussian potential),
 * 0 full enumeration up to n_max (within the atlas ceiling). */
dc_status dc_critical_density(const dc_potential* p, int d, double lambda_beta,
                              int weight_mode, int n_max, uint64_t samples,
                              uint64_t seed, int shards, double* rho_c);
dc_status dc_solve(const dc_potential* p, int d, double lambda_beta, double rho,
                   int weight_mode, int n_max, uint64_t samples, uint64_t seed,
                   int shards, dc_solve_row* out);
dc_status dc_sweep(const dc_potential* p, int d, double lambda_beta,
                   const double* rho_values, size_t count, int weight_mode, int n_max,
                   uint64_t samples, uint64_t seed, int shards, dc_solve_row* rows);

/* ---------- brute-force oracles ---------- */

typedef struct dc_oracle_result {
  double value;
  double error;
  double seconds;
  char method[64];
} dc_oracle_result;

dc_status dc_oracle_direct(const dc_potential* p, int d, int N, double L, double beta,
                           double lambda_beta, int resolution, uint64_t samples,
                           uint64_t seed, int shards, dc_oracle_result* out);
/* quadrature != 0: Fourier coefficients from grid quadrature (reference);
 * 0: unfolded fast path */
dc_status dc_oracle_momentum(const dc_potential* p, int d, int N, double L, double beta,
                             double lambda_beta, int zmax, int quadrature, int allow_n4,
                             dc_oracle_result* out);

typedef struct dc_recurrence_report {
  double lhs;
  double rhs;
  double residual_rel;
  double lhs_error_rel;
  double rhs_error_rel;
  int residual_exceeds_errors;
  char note[96]; /* records how the zero-mode factor is read */
} dc_recurrence_report;

dc_status dc_oracle_recurrence(const dc_potential* p, int d, int N, double L,
                               double beta, double lambda_beta, int resolution,
                               int zmax, dc_recurrence_report* out);

typedef struct dc_limit_factor_row {
  int N;
  double L;
  double lhs;
  double rhs;
  double gap;
} dc_limit_factor_row;

dc_status dc_oracle_limit_factor(const dc_potential* p, int d, int n, double rho,
                                 const double* ladder, size_t count, double beta,
                                 dc_limit_factor_row* rows, int* gap_monotone);

#ifdef __cplusplus
}
#endif

#endif /* DUALCLUSTER_H */

#ifndef RBTLSE_H
#define RBTLSE_H

/* C interface to the reduced biquaternion constrained TLS library.
 *
 * Every object is an opaque handle created by the library and released with
 * the matching *_destroy function. Functions return rbtlse_status; on failure
 * rbtlse_last_error() describes the most recent error on the calling thread.
 * Dense arrays are column-major. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(RBTLSE_BUILDING_LIBRARY)
#define RBTLSE_API __declspec(dllexport)
#else
#define RBTLSE_API __declspec(dllimport)
#endif
#else
#define RBTLSE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rbtlse_status {
  RBTLSE_OK = 0,
  RBTLSE_ERR_DIMENSION_MISMATCH,
  RBTLSE_ERR_INVALID_ARGUMENT,
  RBTLSE_ERR_ASSUMPTION_VIOLATED,
  RBTLSE_ERR_GAP_CONDITION,
  RBTLSE_ERR_BLOCK_NOT_INVERTIBLE,
  RBTLSE_ERR_DEGENERATE_SPECTRUM,
  RBTLSE_ERR_CONDITIONING_UNDEFINED,
  RBTLSE_ERR_SIZE_LIMIT,
  RBTLSE_ERR_NON_CONVERGENCE,
  RBTLSE_ERR_PARSE,
  RBTLSE_ERR_IO,
  RBTLSE_ERR_INTERNAL
} rbtlse_status;

typedef enum rbtlse_kind { RBTLSE_REAL = 0, RBTLSE_COMPLEX = 1 } rbtlse_kind;

typedef struct rbtlse_matrix rbtlse_matrix;
typedef struct rbtlse_solution rbtlse_solution;
typedef struct rbtlse_experiment rbtlse_experiment;

RBTLSE_API const char* rbtlse_last_error(void);
RBTLSE_API const char* rbtlse_status_name(rbtlse_status status);
/* Nonzero for failures of the solver assumptions (as opposed to misuse or I/O). */
RBTLSE_API int rbtlse_status_is_solver_error(rbtlse_status status);

/* ---- matrices ---- */

RBTLSE_API rbtlse_status rbtlse_matrix_create(size_t rows, size_t cols, rbtlse_matrix** out);
/* Each component array holds rows * cols doubles. */
RBTLSE_API rbtlse_status rbtlse_matrix_from_components(size_t rows, size_t cols, const double* c0,
                                                       const double* c1, const double* c2, const double* c3,
                                                       rbtlse_matrix** out);
RBTLSE_API rbtlse_status rbtlse_matrix_load(const char* path, rbtlse_matrix** out);
RBTLSE_API rbtlse_status rbtlse_matrix_save(const rbtlse_matrix* m, const char* path);
RBTLSE_API rbtlse_status rbtlse_matrix_dims(const rbtlse_matrix* m, size_t* rows, size_t* cols);
/* Copies component `index` (0..3) into `out` (rows * cols doubles). */
RBTLSE_API rbtlse_status rbtlse_matrix_component(const rbtlse_matrix* m, int index, double* out);
RBTLSE_API double rbtlse_matrix_norm(const rbtlse_matrix* m);
RBTLSE_API void rbtlse_matrix_destroy(rbtlse_matrix* m);

/* ---- solving ---- */

typedef struct rbtlse_tolerance {
  double gap_rel;
  double gap_abs;
  double v22_cond_max;
  double positive_sigma;
  int enforce_row_count;
} rbtlse_tolerance;

RBTLSE_API void rbtlse_tolerance_defaults(rbtlse_tolerance* tol);

/* `tol` may be NULL for the defaults. The solution keeps a copy of the inputs. */
RBTLSE_API rbtlse_status rbtlse_solve(rbtlse_kind kind, const rbtlse_matrix* a, const rbtlse_matrix* b,
                                      const rbtlse_matrix* c, const rbtlse_matrix* d,
                                      const rbtlse_tolerance* tol, rbtlse_solution** out);

RBTLSE_API rbtlse_kind rbtlse_solution_kind(const rbtlse_solution* s);
RBTLSE_API rbtlse_status rbtlse_solution_dims(const rbtlse_solution* s, size_t* n, size_t* d);
/* Copies X (n * d values). `imag` may be NULL; it is zero-filled for real solutions. */
RBTLSE_API rbtlse_status rbtlse_solution_x(const rbtlse_solution* s, double* real, double* imag);
/* X as an RB matrix (complex X occupies the first two components). */
RBTLSE_API rbtlse_status rbtlse_solution_x_matrix(const rbtlse_solution* s, rbtlse_matrix** out);
RBTLSE_API rbtlse_status rbtlse_solution_perturbations(const rbtlse_solution* s, rbtlse_matrix** delta_a,
                                                       rbtlse_matrix** delta_b);

typedef struct rbtlse_diagnostics {
  double gap;
  double v22_condition;
  double residual_perturbation_norm;
  double eps_equation;   /* ||(A + dA) X - (B + dB)||_F */
  double eps_constraint; /* ||C X - D||_F */
  size_t sigma_count;
} rbtlse_diagnostics;

RBTLSE_API rbtlse_status rbtlse_solution_diagnostics(const rbtlse_solution* s, rbtlse_diagnostics* out);
/* Writes min(capacity, sigma_count) singular values. */
RBTLSE_API rbtlse_status rbtlse_solution_sigma(const rbtlse_solution* s, double* out, size_t capacity);

/* Relative normwise condition number. `iterative` forces the matrix-free path. */
RBTLSE_API rbtlse_status rbtlse_solution_condition(const rbtlse_solution* s, int iterative, double* kappa);

typedef struct rbtlse_assessment {
  double kappa;
  double eps_n;
  double bound;
  double forward_error;
} rbtlse_assessment;

/* Perturbs the stored inputs by the given deltas, re-solves, and compares. */
RBTLSE_API rbtlse_status rbtlse_solution_assess(const rbtlse_solution* s, const rbtlse_matrix* delta_a,
                                                const rbtlse_matrix* delta_b, const rbtlse_matrix* delta_c,
                                                const rbtlse_matrix* delta_d, int iterative,
                                                rbtlse_assessment* out);

RBTLSE_API void rbtlse_solution_destroy(rbtlse_solution* s);

/* ---- experiments ---- */

typedef struct rbtlse_experiment_config {
  const char* experiment; /* accuracy-real | accuracy-complex | bound-real | bound-complex | compare-lse */
  int t_min;
  int t_max;
  int t_step;
  const size_t* m_list; /* NULL: 60, 80, 100, 120 */
  size_t m_count;
  int perturbation_case; /* 1 or 2 */
  rbtlse_kind variant;   /* compare-lse only */
  uint64_t seed;
  int trials;            /* 0: default */
  const double* magnitudes; /* NULL: 1e-11, 1e-8, 1e-5 */
  size_t magnitude_count;
  double noise_scale;
  int iterative_norm;
  const char* out_path; /* NULL or empty: no file */
} rbtlse_experiment_config;

RBTLSE_API void rbtlse_experiment_config_defaults(rbtlse_experiment_config* cfg);
RBTLSE_API rbtlse_status rbtlse_experiment_run(const rbtlse_experiment_config* cfg, rbtlse_experiment** out);

typedef struct rbtlse_record {
  int t; /* -1 when not applicable */
  size_t m;
  uint64_t seed;
  int trial;
  int is_mean;
  /* NaN when not applicable or when the row failed. */
  double eps1, eps2, delta_norm, fwd_err, bound, eps_t, eps_l;
  int bound_violated;
  const char* error; /* empty on success; valid while the experiment lives */
} rbtlse_record;

RBTLSE_API size_t rbtlse_experiment_record_count(const rbtlse_experiment* e);
RBTLSE_API rbtlse_status rbtlse_experiment_record(const rbtlse_experiment* e, size_t index, rbtlse_record* out);
/* Valid while the experiment lives. */
RBTLSE_API const char* rbtlse_experiment_csv(const rbtlse_experiment* e);
RBTLSE_API rbtlse_status rbtlse_experiment_write_csv(const rbtlse_experiment* e, const char* path);
RBTLSE_API void rbtlse_experiment_destroy(rbtlse_experiment* e);

#ifdef __cplusplus
}
#endif

#endif

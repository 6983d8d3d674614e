/* rotsym: rotational symmetry discovery toolkit, C API.
 *
 * The shared library wraps the C++ core behind opaque handles and status
 * codes. Every function returns ROTSYM_OK on success; on failure the
 * thread-local message from rotsym_last_error() describes what went wrong.
 *
 * Quaternions are passed as (w, x, y, z). Angles are radians.
 */
#ifndef ROTSYM_H
#define ROTSYM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ROTSYM_API __declspec(dllexport)
#else
#define ROTSYM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rotsym_status {
  ROTSYM_OK = 0,
  ROTSYM_ERR_CONFIG = 2,
  ROTSYM_ERR_DATA = 3,
  ROTSYM_ERR_DEGENERATE = 4,
  ROTSYM_ERR_NONCONVERGENCE = 5,
  ROTSYM_ERR_INTERNAL = 6
} rotsym_status;

ROTSYM_API const char* rotsym_version(void);

/* Message for the most recent failure on this thread ("" if none). */
ROTSYM_API const char* rotsym_last_error(void);

/* ------------------------------------------------------------------ */
/* Opaque handles                                                      */
/* ------------------------------------------------------------------ */

typedef struct rotsym_dataset rotsym_dataset;
typedef struct rotsym_table rotsym_table;

ROTSYM_API rotsym_status rotsym_dataset_load(const char* path, rotsym_dataset** out);
ROTSYM_API rotsym_status rotsym_dataset_save(const rotsym_dataset* d, const char* path);
ROTSYM_API void rotsym_dataset_free(rotsym_dataset* d);
ROTSYM_API size_t rotsym_dataset_size(const rotsym_dataset* d);
/* 2 for SO(2) datasets, 3 for SO(3). */
ROTSYM_API int rotsym_dataset_group_dim(const rotsym_dataset* d);
ROTSYM_API int rotsym_dataset_latent_dim(const rotsym_dataset* d);

ROTSYM_API rotsym_status rotsym_table_load(const char* path, rotsym_table** out);
ROTSYM_API void rotsym_table_free(rotsym_table* t);
ROTSYM_API size_t rotsym_table_size(const rotsym_table* t);

/* ------------------------------------------------------------------ */
/* Numeric kernels over flat arrays                                    */
/* ------------------------------------------------------------------ */

ROTSYM_API rotsym_status rotsym_so2_frechet_mean(const double* angles, size_t n,
                                                 double* out_angle);

/* method: 0 = matrix-Fisher mode (SVD moment matching), 1 = Karcher. */
ROTSYM_API rotsym_status rotsym_so3_frechet_mean(const double* quats_wxyz, size_t n,
                                                 int method, double* out_quat_wxyz);

ROTSYM_API rotsym_status rotsym_wasserstein1_so2(const double* a, const double* b, size_t n,
                                                 double* out);
ROTSYM_API rotsym_status rotsym_wasserstein2_so3(const double* quats_a, const double* quats_b,
                                                 size_t n, double* out);

/* labels: nonzero = in-distribution; higher score = more in-distribution. */
ROTSYM_API rotsym_status rotsym_auc_roc(const double* scores, const int* labels, size_t n,
                                        double* out);

/* Moment ratio A(s) = coth(s) - 1/s and its inverse. */
ROTSYM_API rotsym_status rotsym_a_ratio(double s, double* out);
ROTSYM_API rotsym_status rotsym_invert_a(double a, double* out);

/* ------------------------------------------------------------------ */
/* Pipeline commands (the CLI is a thin wrapper over these)            */
/* ------------------------------------------------------------------ */

typedef struct rotsym_gen_opts {
  const char* experiment;  /* mnist_analog | fashion_analog | fisher_analog | custom */
  const char* spec_path;   /* class-spec TOML for custom; NULL otherwise */
  const char* config_path; /* optional overrides TOML; NULL if unused */
  const char* out_dir;
  uint64_t seed;
} rotsym_gen_opts;

typedef struct rotsym_run_opts {
  const char* data_path;
  const char* table_path;  /* NULL where not applicable */
  const char* truth_path;  /* eval only; NULL otherwise */
  const char* config_path; /* optional overrides TOML; NULL if unused */
  const char* out_dir;
  uint64_t seed;
  int k;                   /* <= 0 -> config/default */
  const char* metric;      /* "cosine" | "euclidean" | NULL */
  const char* family;      /* "uniform_arc" | "wrapped_gaussian" | "matrix_fisher" | NULL */
} rotsym_run_opts;

typedef struct rotsym_frechet_opts {
  const char* poses_path;
  const char* method; /* "auto" | "circular" | "fisher_mode" | "karcher"; NULL = auto */
} rotsym_frechet_opts;

/* Each command writes its report files and, when summary is non-NULL,
 * copies a one-line summary (truncated to summary_cap, always
 * NUL-terminated). */
ROTSYM_API rotsym_status rotsym_cmd_gen(const rotsym_gen_opts* opts, char* summary,
                                        size_t summary_cap);
ROTSYM_API rotsym_status rotsym_cmd_normalize(const rotsym_run_opts* opts, char* summary,
                                              size_t summary_cap);
ROTSYM_API rotsym_status rotsym_cmd_estimate(const rotsym_run_opts* opts, char* summary,
                                             size_t summary_cap);
ROTSYM_API rotsym_status rotsym_cmd_eval(const rotsym_run_opts* opts, char* summary,
                                         size_t summary_cap);
ROTSYM_API rotsym_status rotsym_cmd_ood(const rotsym_run_opts* opts, char* summary,
                                        size_t summary_cap);
ROTSYM_API rotsym_status rotsym_cmd_frechet(const rotsym_frechet_opts* opts, char* summary,
                                            size_t summary_cap);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ROTSYM_H */

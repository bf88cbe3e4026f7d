/*
 * mubsearch C API.
 *
 * Every object is an opaque handle created by a *_create / *_load / *_run
 * call and released with the matching *_free. Functions return a
 * mub_status; on failure, mub_last_error() describes the problem for the
 * calling thread. Strings returned through char** belong to the caller and
 * are released with mub_string_free().
 */
#ifndef MUBSEARCH_H_
#define MUBSEARCH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MUBSEARCH_BUILDING)
#define MUB_API __declspec(dllexport)
#else
#define MUB_API __declspec(dllimport)
#endif
#else
#define MUB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mub_status {
  MUB_OK = 0,
  MUB_ERR_INVALID_ARGUMENT = 1, /* bad value, bad dimension, non-prime order, ... */
  MUB_ERR_FORMAT = 2,           /* malformed config, basis-set or trace file */
  MUB_ERR_IO = 3,               /* unreadable/unwritable path, no trace files */
  MUB_ERR_INTERNAL = 4
} mub_status;

typedef struct mub_config mub_config;
typedef struct mub_basis_set mub_basis_set;
typedef struct mub_verification mub_verification;
typedef struct mub_search_result mub_search_result;

typedef struct mub_restart_info {
  uint64_t seed;
  double initial_objective;
  double final_objective;
  uint64_t evaluations;
  double wall_seconds;
  int success;
} mub_restart_info;

typedef struct mub_sample_stats {
  size_t count;
  double expected;   /* 1/n */
  double max_abs_z;  /* worst |mean - 1/n| / standard error over all entries */
  int within_3_sigma;
} mub_sample_stats;

MUB_API const char* mub_version(void);
MUB_API const char* mub_last_error(void);
MUB_API void mub_string_free(char* s);

/* ---- experiment configuration ---- */
MUB_API mub_status mub_config_create(mub_config** out);
MUB_API mub_status mub_config_load(const char* path, mub_config** out);
/* Flat key/value override, e.g. ("restarts", "20") or ("annealing.cooling", "0.9"). */
MUB_API mub_status mub_config_set(mub_config* cfg, const char* key, const char* value);
MUB_API mub_status mub_config_to_json(const mub_config* cfg, char** out_json);
MUB_API void mub_config_free(mub_config* cfg);

/* ---- search ---- */
/* Runs the multistart search and writes its artifacts to the configured output directory. */
MUB_API mub_status mub_search_run(const mub_config* cfg, mub_search_result** out);
MUB_API double mub_search_best_objective(const mub_search_result* r);
/* 1 when the best objective is below the configured threshold. */
MUB_API int mub_search_found(const mub_search_result* r);
MUB_API size_t mub_search_success_count(const mub_search_result* r);
MUB_API size_t mub_search_restart_count(const mub_search_result* r);
MUB_API mub_status mub_search_restart_info(const mub_search_result* r, size_t index,
                                           mub_restart_info* out);
MUB_API mub_status mub_search_output_dir(const mub_search_result* r, char** out_path);
MUB_API mub_status mub_search_describe(const mub_search_result* r, char** out_text);
MUB_API mub_status mub_search_best_set(const mub_search_result* r, mub_basis_set** out);
MUB_API void mub_search_result_free(mub_search_result* r);

/* ---- basis sets ---- */
/* `entries` holds m*d*d complex numbers as interleaved (re, im) doubles,
 * basis after basis, each basis row-major with basis vectors as columns. */
MUB_API mub_status mub_basis_set_create(size_t d, size_t m, int gauge_fixed, const double* entries,
                                        mub_basis_set** out);
MUB_API mub_status mub_basis_set_load(const char* path, mub_basis_set** out);
MUB_API mub_status mub_basis_set_save(const mub_basis_set* set, const char* path);
MUB_API mub_status mub_basis_set_dims(const mub_basis_set* set, size_t* d, size_t* m);
/* Copies basis `index` (0-based) as 2*d*d interleaved doubles. */
MUB_API mub_status mub_basis_set_get_basis(const mub_basis_set* set, size_t index, double* out,
                                           size_t capacity);
MUB_API mub_status mub_basis_set_objective(const mub_basis_set* set, double* out);
MUB_API void mub_basis_set_free(mub_basis_set* set);

/* kind: "prime" (complete set, d prime), "fourier" ({I, F_d}) or "identity" ({I}). */
MUB_API mub_status mub_construct(const char* kind, size_t d, mub_basis_set** out);

/* ---- verification ---- */
MUB_API mub_status mub_verify(const mub_basis_set* set, double tol, mub_verification** out);
MUB_API int mub_verification_passed(const mub_verification* v);
MUB_API int mub_verification_orthonormal(const mub_verification* v);
MUB_API int mub_verification_unbiased(const mub_verification* v);
MUB_API double mub_verification_total(const mub_verification* v);
/* Writes up to `capacity` 1-based indices of the maximum unbiased subset; *count gets its size. */
MUB_API mub_status mub_verification_subset(const mub_verification* v, size_t* indices,
                                           size_t capacity, size_t* count);
MUB_API mub_status mub_verification_to_json(const mub_verification* v, char** out_json);
MUB_API mub_status mub_verification_describe(const mub_verification* v, char** out_text);
MUB_API void mub_verification_free(mub_verification* v);

/* ---- sampling and traces ---- */
/* mode: "haar", "paper-literal-uniform" or "qr". `stats` and `out_text`
 * (a printable moment summary) may be NULL. */
MUB_API mub_status mub_sample_write(size_t n, size_t count, const char* mode, uint64_t seed,
                                    const char* path, mub_sample_stats* stats, char** out_text);
MUB_API mub_status mub_trace_export(const char* run_dir, const char* out_path, size_t* rows);

#ifdef __cplusplus
}
#endif

#endif /* MUBSEARCH_H_ */

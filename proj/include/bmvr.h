/* bmvr: Bayesian multivariate regression with variable selection.
 *
 * C interface to the sampling library: opaque handles, integer error codes,
 * JSON strings for structured configuration.  Every fallible call returns
 * BMVR_OK (0) or an error code; bmvr_last_error() describes the most recent
 * failure on the calling thread.
 */
#ifndef BMVR_H
#define BMVR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BMVR_API __declspec(dllexport)
#else
#define BMVR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  BMVR_OK = 0,
  BMVR_ERR_INVALID_ARGUMENT = 1, /* bad JSON/config, bad dimensions, unknown method */
  BMVR_ERR_RUNTIME = 2           /* sampler or I/O failure */
};

/* Train/test regression data plus, for synthetic data, the generating truth. */
typedef struct bmvr_dataset bmvr_dataset;
/* Retained posterior draws from one sampler run. */
typedef struct bmvr_chain bmvr_chain;

/* Copies the library version string ("MAJOR.MINOR.PATCH") into buf and
 * returns the number of characters written (excluding the terminator),
 * or the required length if buf is NULL or too small. */
BMVR_API int bmvr_version(char* buf, size_t len);

/* Message for the last failure on this thread; empty string when the last
 * call succeeded.  The pointer stays valid until the next bmvr_* call on the
 * same thread. */
BMVR_API const char* bmvr_last_error(void);

/* -------------------------------------------------------------- datasets */

/* design_json keys (all optional): n, n_test, p, q, rho_x, rho_eps, seed. */
BMVR_API int bmvr_simulate(const char* design_json, bmvr_dataset** out);

/* spec_json keys: response_columns, predictor_columns or predictor_first/
 * predictor_last/predictor_stride, drop_rows (1-based), train_count. */
BMVR_API int bmvr_ingest(const char* csv_path, const char* spec_json,
                         bmvr_dataset** out);

BMVR_API int bmvr_dataset_load(const char* dir, bmvr_dataset** out);
BMVR_API int bmvr_dataset_save(const bmvr_dataset* data, const char* dir);
BMVR_API int bmvr_dataset_dims(const bmvr_dataset* data, int* n_train, int* n_test,
                               int* p, int* q);
BMVR_API void bmvr_dataset_free(bmvr_dataset* data);

/* --------------------------------------------------------------- fitting */

/* method: "dss", "twostep", "dhs", or "mbsp".  config_json may be NULL/"{}"
 * for defaults; keys mirror the method's config (iterations, burn_in, ...).
 * seed overrides any seed in config_json. */
BMVR_API int bmvr_fit(const bmvr_dataset* data, const char* method,
                      const char* config_json, uint64_t seed, bmvr_chain** out);

BMVR_API int bmvr_chain_info(const bmvr_chain* chain, int* retained, int* p, int* q);

/* Posterior summary of the chain.  statistic: "mean" or "median".  B receives
 * p*q and Sigma q*q doubles, column-major; either pointer may be NULL.  With
 * original != 0 the estimates are mapped back to the unstandardized scale of
 * `data`, which must be the dataset the chain was fitted on (also required
 * for the twostep Sigma estimate). */
BMVR_API int bmvr_chain_estimate(const bmvr_chain* chain, const bmvr_dataset* data,
                                 const char* statistic, int original, double* B,
                                 double* Sigma);

/* Original-scale losses against the dataset's stored truth and test split.
 * Null pointers skip the corresponding output; loss_B/loss_Sigma require the
 * dataset to carry the generating truth, rmse requires a test split with
 * rmse_len >= q. */
BMVR_API int bmvr_chain_losses(const bmvr_chain* chain, const bmvr_dataset* data,
                               const char* statistic, double* loss_B,
                               double* loss_Sigma, double* loss_pred, double* rmse,
                               size_t rmse_len);

BMVR_API int bmvr_chain_save(const bmvr_chain* chain, const char* dir);
BMVR_API void bmvr_chain_free(bmvr_chain* chain);

/* ------------------------------------------------- whole-command helpers */
/* These mirror the CLI subcommands and write the same file layouts. */

BMVR_API int bmvr_cmd_simulate(const char* design_json, const char* out_dir);

/* options_json: {"method": "...", "config": {...}, "seed": u64,
 * "iterations": n, "burn_in": n, "summary": "mean"|"median",
 * "save_chain": bool} — only "method" is required. */
BMVR_API int bmvr_cmd_fit(const char* dataset_dir, const char* options_json,
                          const char* out_dir);

/* threads <= 0 uses the study config / hardware default.  error_rows (may be
 * NULL) receives the number of failed replicate rows; the call still returns
 * BMVR_OK when the study completed with some failed rows. */
BMVR_API int bmvr_cmd_study(const char* study_json, const char* out_dir, int threads,
                            int* error_rows);

BMVR_API int bmvr_cmd_ingest(const char* csv_path, const char* spec_json,
                             const char* out_dir);

BMVR_API int bmvr_cmd_report(const char* results_csv, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BMVR_H */

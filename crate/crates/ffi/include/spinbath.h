/* SPDX-License-Identifier: Apache-2.0 */

#ifndef SPINBATH_H
#define SPINBATH_H

/* Generated by cbindgen from the spinbath-ffi sources. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SbStatus {
  SB_STATUS_OK = 0,
  SB_STATUS_INVALID_ARGUMENT = 1,
  SB_STATUS_CONFIG = 2,
  SB_STATUS_CONVERGENCE = 3,
  SB_STATUS_IO = 4,
  SB_STATUS_PANIC = 5,
} SbStatus;

/**
 * Resolved scenario configuration.
 */
typedef struct SbConfig SbConfig;

/**
 * Completed run: time series, summary and the configuration it used.
 */
typedef struct SbRun SbRun;

/**
 * One output time.
 */
typedef struct SbRecord {
  double t;
  double corr;
  double concurrence;
  double e_total;
  double e_c;
  double e_e;
  double e_int;
  double purity;
  double norm_err;
} SbRecord;

typedef struct SbSummary {
  double e_psi;
  double e0;
  double min_corr;
  double t_at_min;
  double corr0;
  double max_concurrence;
} SbSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call on the same thread.
 */
const char *sb_last_error(void);

/**
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SbStatus sb_config_from_preset(const char *name, struct SbConfig **out);

/**
 * Reads a `key = value` config file on top of the defaults.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SbStatus sb_config_from_file(const char *path, struct SbConfig **out);

/**
 * Sets one config key, with the same keys and syntax as config files.
 *
 * # Safety
 * `config` must come from this library; `key` and `value` must be
 * NUL-terminated strings.
 */
enum SbStatus sb_config_set(struct SbConfig *config, const char *key, const char *value);

/**
 * Config-file text of `config`; release it with [`sb_string_free`].
 *
 * # Safety
 * `config` must come from this library and `out` must be a valid pointer.
 */
enum SbStatus sb_config_to_string(const struct SbConfig *config, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void sb_string_free(char *s);

/**
 * # Safety
 * `config` must be null or a handle from this library, freed once.
 */
void sb_config_free(struct SbConfig *config);

/**
 * Runs the scenario to completion.
 *
 * # Safety
 * `config` must come from this library and `out` must be a valid pointer.
 */
enum SbStatus sb_run(const struct SbConfig *config, struct SbRun **out);

/**
 * Number of records in `run`, 0 for a null handle.
 *
 * # Safety
 * `run` must be null or a handle from this library.
 */
size_t sb_run_len(const struct SbRun *run);

/**
 * # Safety
 * `run` must come from this library and `out` must be a valid pointer.
 */
enum SbStatus sb_run_record(const struct SbRun *run, size_t index, struct SbRecord *out);

/**
 * # Safety
 * `run` must come from this library and `out` must be a valid pointer.
 */
enum SbStatus sb_run_summary(const struct SbRun *run, struct SbSummary *out);

/**
 * Writes `timeseries.csv`, `summary.csv` and `manifest.txt` into `dir`.
 *
 * # Safety
 * `run` must come from this library and `dir` must be a NUL-terminated
 * string.
 */
enum SbStatus sb_run_write(const struct SbRun *run, const char *dir);

/**
 * # Safety
 * `run` must be null or a handle from this library, freed once.
 */
void sb_run_free(struct SbRun *run);

/**
 * Ground-state energy and central correlation of the full system.
 *
 * # Safety
 * `config` must come from this library; `e0` and `corr0` must be valid.
 */
enum SbStatus sb_ground(const struct SbConfig *config, double *e0, double *corr0);

/**
 * Runs `config` once per seed on `workers` threads. `summaries` and
 * `statuses` receive one entry per seed; a failed seed leaves its summary
 * zeroed and does not stop the others. The return value reports argument
 * problems only.
 *
 * # Safety
 * `seeds`, `summaries` and `statuses` must each point to `n_seeds`
 * elements.
 */
enum SbStatus sb_sweep(const struct SbConfig *config,
                       const uint64_t *seeds,
                       size_t n_seeds,
                       size_t workers,
                       struct SbSummary *summaries,
                       enum SbStatus *statuses);

/**
 * Concurrence of a 4×4 density matrix given as row-major real and
 * imaginary parts in the basis ↑↑, ↑↓, ↓↑, ↓↓.
 *
 * # Safety
 * `re` and `im` must point to 16 values and `out` must be valid.
 */
enum SbStatus sb_concurrence(const double *re, const double *im, double *out);

size_t sb_preset_count(void);

/**
 * Name of preset `index`, or null when out of range. The string is static.
 */
const char *sb_preset_name(size_t index);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINBATH_H */

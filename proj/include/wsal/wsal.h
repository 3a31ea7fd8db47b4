/* C interface to the wsal active-learning library.
 *
 * Every fallible call returns a wsal_status; on failure a message describing
 * the error is available from wsal_last_error() on the same thread until the
 * next failing call. Handles are opaque and released with their *_free
 * function; passing NULL to a *_free function is a no-op.
 */
#ifndef WSAL_H
#define WSAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(WSAL_BUILDING)
#define WSAL_API __declspec(dllexport)
#else
#define WSAL_API __declspec(dllimport)
#endif
#else
#define WSAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wsal_status {
    WSAL_OK = 0,
    WSAL_E_INVALID_ARGUMENT = 1,
    WSAL_E_CONFIG = 2,
    WSAL_E_IO = 3,
    WSAL_E_MISSING_COLUMN = 4,
    WSAL_E_NON_NUMERIC_CELL = 5,
    WSAL_E_EMPTY_FILE = 6,
    WSAL_E_MALFORMED_ROW = 7,
    WSAL_E_VACUOUS_BOUND = 8,
    WSAL_E_INSUFFICIENT_ITEMS = 9,
    WSAL_E_INSUFFICIENT_CLASS_INSTANCES = 10,
    WSAL_E_NON_FINITE_LOSS = 11,
    WSAL_E_DIMENSION_MISMATCH = 12,
    WSAL_E_RUNTIME = 13
} wsal_status;

typedef enum wsal_strategy {
    WSAL_STRATEGY_RANDOM = 0,
    WSAL_STRATEGY_GREEDY = 1,
    WSAL_STRATEGY_EPS_GREEDY = 2,
    WSAL_STRATEGY_WEIGHTED = 3
} wsal_strategy;

typedef struct wsal_dataset wsal_dataset;
typedef struct wsal_config wsal_config;
typedef struct wsal_result wsal_result;

WSAL_API const char* wsal_version(void);
WSAL_API const char* wsal_rng_algorithm(void);
WSAL_API const char* wsal_last_error(void);
WSAL_API const char* wsal_status_name(wsal_status status);

/* Strings returned through char** out-parameters are released with this. */
WSAL_API void wsal_string_free(char* s);

/* ---- probability core ------------------------------------------------- */

WSAL_API wsal_status wsal_entropy(const double* p, size_t k, double* out);
/* out receives k entries of (1 - chi) r + chi / k. */
WSAL_API wsal_status wsal_smooth(const double* r, size_t k, double chi, double* out);
WSAL_API wsal_status wsal_entropy_lower_bound(double chi, int k, double* out);

typedef struct wsal_lemma_report {
    double eta;
    double zeta;
    double p_s;
    uint64_t n_s;
} wsal_lemma_report;

/* On WSAL_E_VACUOUS_BOUND, eta, zeta and p_s are still filled in and n_s is 0. */
WSAL_API wsal_status wsal_lemma_bound(double beta, double chi, int k, double delta, wsal_lemma_report* out);

/* ---- sampling ---------------------------------------------------------- */

/* Weighted sampling without replacement of k ids; out_ids receives k ids
 * ordered by descending key. */
WSAL_API wsal_status wsal_select_top_k(const uint64_t* ids, const double* weights, size_t n, size_t k,
                                       uint64_t seed, uint64_t* out_ids);
WSAL_API wsal_status wsal_uniform_sample(const uint64_t* ids, size_t n, size_t k, uint64_t seed, uint64_t* out_ids);

/* ---- datasets ---------------------------------------------------------- */

WSAL_API wsal_status wsal_dataset_load_csv(const char* path, const char* label_column, wsal_dataset** out);
WSAL_API wsal_status wsal_dataset_save_csv(const wsal_dataset* ds, const char* path);
WSAL_API wsal_status wsal_dataset_save_label_manifest(const wsal_dataset* ds, const char* path);
WSAL_API size_t wsal_dataset_rows(const wsal_dataset* ds);
WSAL_API size_t wsal_dataset_dim(const wsal_dataset* ds);
WSAL_API int wsal_dataset_classes(const wsal_dataset* ds);
WSAL_API uint64_t wsal_dataset_checksum(const wsal_dataset* ds);
WSAL_API void wsal_dataset_free(wsal_dataset* ds);

typedef struct wsal_synth_spec {
    size_t n;
    size_t d;
    int k;
    double beta;
    const double* train_prevalence; /* k entries, or NULL for uniform */
    const double* pool_prevalence;  /* k entries, or NULL for uniform */
    int pocket_class;
    double separation;
    uint64_t seed;
    double chi_floor;
} wsal_synth_spec;

WSAL_API void wsal_synth_spec_default(wsal_synth_spec* spec);
WSAL_API wsal_status wsal_synth_generate(const wsal_synth_spec* spec, wsal_dataset** out);
/* Pocket ids of a generated dataset (0 for loaded datasets). */
WSAL_API size_t wsal_dataset_pocket_count(const wsal_dataset* ds);
WSAL_API size_t wsal_dataset_pocket_ids(const wsal_dataset* ds, uint64_t* out, size_t capacity);
WSAL_API wsal_status wsal_dataset_save_pocket_manifest(const wsal_dataset* ds, const char* path);

typedef struct wsal_lemma_validation {
    wsal_lemma_report bound;
    size_t pocket_size;
    size_t repeats;
    size_t hits;
    double hit_rate;
    double target;
    double standard_error;
} wsal_lemma_validation;

/* equal_weights != 0 gives pocket items the same weight as the rest. */
WSAL_API wsal_status wsal_validate_lemma(const wsal_synth_spec* spec, double chi, double delta, size_t repeats,
                                         int equal_weights, wsal_lemma_validation* out);

/* ---- experiments -------------------------------------------------------- */

WSAL_API wsal_status wsal_config_load(const char* path, wsal_config** out);
/* base_dir may be NULL; relative paths are then kept as given. */
WSAL_API wsal_status wsal_config_parse(const char* text, const char* base_dir, wsal_config** out);
WSAL_API wsal_status wsal_config_format(const wsal_config* cfg, char** out);
WSAL_API void wsal_config_free(wsal_config* cfg);

/* Loads the dataset named by the config. */
WSAL_API wsal_status wsal_config_load_dataset(const wsal_config* cfg, wsal_dataset** out);

WSAL_API wsal_status wsal_experiment_run(const wsal_config* cfg, const wsal_dataset* ds, wsal_result** out);
/* Writes records.jsonl, summary.json, timings.tsv, run.cfg and manifest.json to the config's out_dir. */
WSAL_API wsal_status wsal_result_write(const wsal_result* res);

typedef struct wsal_round_record {
    size_t trial;
    size_t round;
    size_t labeled_count;
    double holdout_accuracy;
    int64_t elapsed_ms;
    const uint64_t* selected_ids; /* valid until the result is freed */
    size_t selected_count;
} wsal_round_record;

WSAL_API size_t wsal_result_record_count(const wsal_result* res);
WSAL_API wsal_status wsal_result_record(const wsal_result* res, size_t index, wsal_round_record* out);
WSAL_API double wsal_result_final_mean(const wsal_result* res);
WSAL_API double wsal_result_final_std(const wsal_result* res);
WSAL_API int wsal_result_std_defined(const wsal_result* res);
WSAL_API void wsal_result_free(wsal_result* res);

/* format is "md" or "csv". */
WSAL_API wsal_status wsal_report_render(const char* results_dir, const char* format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* WSAL_H */

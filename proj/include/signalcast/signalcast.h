/* C interface to the signalcast forecasting library.
 *
 * Every function returns an sc_status. On failure the message of the last
 * error raised on the calling thread is available from sc_last_error().
 * Objects are opaque handles released with the matching *_free function;
 * *_free accepts NULL.
 */
#ifndef SIGNALCAST_H
#define SIGNALCAST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SC_API __declspec(dllexport)
#else
#define SC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
  SC_OK = 0,
  SC_ERR_CONFIG = 1,   /* invalid configuration value or unknown name */
  SC_ERR_INPUT = 2,    /* unreadable or inconsistent input data */
  SC_ERR_ARGUMENT = 3, /* NULL handle or out-of-range argument */
  SC_ERR_INTERNAL = 4  /* library invariant violated */
} sc_status;

typedef struct sc_config sc_config;
typedef struct sc_result sc_result;
typedef struct sc_dataset sc_dataset;
typedef struct sc_model sc_model;

SC_API const char* sc_version(void);
/* Short machine-readable code: "OK", "E_CONFIG", "E_INPUT", "E_ARGUMENT", "E_INTERNAL". */
SC_API const char* sc_status_code(sc_status status);
/* Message of the last failure on this thread ("" if none). */
SC_API const char* sc_last_error(void);
SC_API void sc_string_free(char* s);

/* Configuration: defaults, then files/text, then SIGNALCAST_* environment
 * overrides, then explicit sets, in whatever order the caller applies them. */
SC_API sc_status sc_config_new(sc_config** out);
SC_API void sc_config_free(sc_config* config);
SC_API sc_status sc_config_load_file(sc_config* config, const char* path);
SC_API sc_status sc_config_parse(sc_config* config, const char* text);
SC_API sc_status sc_config_apply_env(sc_config* config);
SC_API sc_status sc_config_set(sc_config* config, const char* key, const char* value);
/* Current value (or default) of `key`; free with sc_string_free. */
SC_API sc_status sc_config_get(const sc_config* config, const char* key, char** out);

/* Commands. Each writes its files under paths.out and returns a result. */
SC_API sc_status sc_run_synth(const sc_config* config, sc_result** out);
SC_API sc_status sc_run_generate(const sc_config* config, sc_result** out);
SC_API sc_status sc_run_filter(const sc_config* config, sc_result** out);
SC_API sc_status sc_run_sweep(const sc_config* config, sc_result** out);
SC_API sc_status sc_run_report(const sc_config* config, sc_result** out);

SC_API const char* sc_result_message(const sc_result* result);
SC_API size_t sc_result_output_count(const sc_result* result);
SC_API const char* sc_result_output(const sc_result* result, size_t index);
SC_API size_t sc_result_warning_count(const sc_result* result);
SC_API const char* sc_result_warning(const sc_result* result, size_t index);
SC_API void sc_result_free(sc_result* result);

/* Datasets. Features are row-major, n_rows x n_signals. `weights` may be
 * NULL (all 1). */
SC_API sc_status sc_dataset_create(size_t n_signals, const char* const* signal_names, size_t n_rows,
                                   const double* features, const int* labels, const double* weights,
                                   sc_dataset** out);
SC_API sc_status sc_dataset_read(const char* path, sc_dataset** out);
SC_API sc_status sc_dataset_write(const sc_dataset* dataset, const char* path);
SC_API size_t sc_dataset_rows(const sc_dataset* dataset);
SC_API size_t sc_dataset_signals(const sc_dataset* dataset);
SC_API sc_status sc_dataset_row(const sc_dataset* dataset, size_t index, double* features, int* label,
                                double* weight);
/* Applies filter `name` ("none", "smote", "spread_subsample", "smote_pp")
 * with the filters.* parameters of `config` (NULL: defaults). */
SC_API sc_status sc_dataset_filter(const sc_dataset* dataset, const sc_config* config, const char* name,
                                   uint64_t seed, sc_dataset** out);
SC_API void sc_dataset_free(sc_dataset* dataset);

/* Classifier trained with the classifier.* keys of `config` (NULL: defaults). */
SC_API sc_status sc_model_train(const sc_dataset* train, const sc_config* config, sc_model** out);
/* P(A = 1 | row) for every row of `dataset`; `scores` holds sc_dataset_rows values. */
SC_API sc_status sc_model_score(const sc_model* model, const sc_dataset* dataset, double* scores);
SC_API sc_status sc_model_write(const sc_model* model, const char* path);
SC_API sc_status sc_model_read(const char* path, sc_model** out);
SC_API void sc_model_free(sc_model* model);

/* Weighted AUC; `weights` may be NULL. */
SC_API sc_status sc_auc(size_t n, const double* scores, const int* labels, const double* weights, double* out);

#ifdef __cplusplus
}
#endif

#endif /* SIGNALCAST_H */

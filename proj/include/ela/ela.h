/* C interface of the landscape-feature / fingerprint-embedding library.
 *
 * Every function that can fail returns an ela_status. On failure the message
 * is available from ela_last_error() on the same thread until the next call.
 * Objects are opaque handles released with their *_free function; freeing
 * NULL is a no-op. Matrices passed as raw arrays are row-major.
 */
#ifndef ELA_H
#define ELA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ELA_BUILDING_LIBRARY)
#    define ELA_API __declspec(dllexport)
#  else
#    define ELA_API __declspec(dllimport)
#  endif
#else
#  define ELA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ela_status {
  ELA_OK = 0,
  ELA_ERR_INVALID_ARGUMENT = 1,
  ELA_ERR_UNSUPPORTED = 2,
  ELA_ERR_DEGENERATE_SAMPLE = 3,
  ELA_ERR_RANK_DEFICIENT = 4,
  ELA_ERR_SCHEMA = 5,
  ELA_ERR_IO = 6,
  ELA_ERR_NUMERICAL = 7,
  ELA_ERR_INTERNAL = 8
} ela_status;

typedef struct ela_instance ela_instance;
typedef struct ela_matrix ela_matrix;
typedef struct ela_model ela_model;
typedef struct ela_corr ela_corr;
typedef struct ela_cv_report ela_cv_report;

ELA_API const char* ela_version(void);
ELA_API const char* ela_last_error(void);
ELA_API const char* ela_status_name(ela_status status);

/* Warnings (dropped replications, zero-range features, ill-conditioning).
 * Passing NULL restores the default handler, which prints to stderr. */
typedef void (*ela_warning_fn)(const char* message, void* user_data);
ELA_API void ela_set_warning_callback(ela_warning_fn callback, void* user_data);

/* ---- problems ---------------------------------------------------------- */

/* function_id 1..24 (BBOB), 25 (HappyCat), 26 (HGBat). */
ELA_API ela_status ela_instance_create(int function_id, int instance_id, int dimension, ela_instance** out);
ELA_API void ela_instance_free(ela_instance* instance);
ELA_API int ela_instance_dimension(const ela_instance* instance);
ELA_API ela_status ela_instance_evaluate(const ela_instance* instance, const double* x, size_t dimension,
                                         double* value);
/* Location and value of the global optimum. */
ELA_API ela_status ela_instance_optimum(const ela_instance* instance, double* x, size_t dimension, double* value);

/* ---- sampling ---------------------------------------------------------- */

/* Fills count*dimension values in [0, 1). */
ELA_API ela_status ela_sobol_points(int dimension, int count, uint64_t seed, double* out);
ELA_API ela_status ela_uniform_points(int dimension, int count, uint64_t seed, double* out);
/* sampler: "sobol" or "uniform". CSV columns x1..xd,y. */
ELA_API ela_status ela_write_design_csv(const ela_instance* instance, const char* sampler, int count, uint64_t seed,
                                        const char* path);

/* ---- features ---------------------------------------------------------- */

ELA_API size_t ela_feature_count(void);
ELA_API const char* ela_feature_name(size_t index);
ELA_API const char* ela_feature_group(size_t index);

typedef struct ela_feature_options {
  const char* sampler; /* "sobol" (default when NULL) or "uniform" */
  int sample_count;
  int replications;
} ela_feature_options;

ELA_API void ela_feature_options_default(ela_feature_options* options);
/* Writes ela_feature_count() medians to out. */
ELA_API ela_status ela_feature_vector(const ela_instance* instance, const ela_feature_options* options, uint64_t seed,
                                      double* out);
/* Seed that ela_feature_matrix_compute uses for one instance. */
ELA_API uint64_t ela_instance_seed(uint64_t seed, int function_id, int instance_id);
/* Problem-major suite; threads = 0 uses all hardware threads. */
ELA_API ela_status ela_feature_matrix_compute(const int* function_ids, size_t function_count, const int* instance_ids,
                                              size_t instance_count, int dimension,
                                              const ela_feature_options* options, uint64_t seed, unsigned threads,
                                              ela_matrix** out);

/* ---- labeled matrices -------------------------------------------------- */

ELA_API ela_status ela_matrix_create(size_t rows, size_t cols, const int* function_ids, const int* instance_ids,
                                     const char* const* column_names, const double* data, ela_matrix** out);
ELA_API void ela_matrix_free(ela_matrix* matrix);
ELA_API size_t ela_matrix_rows(const ela_matrix* matrix);
ELA_API size_t ela_matrix_cols(const ela_matrix* matrix);
ELA_API ela_status ela_matrix_get(const ela_matrix* matrix, size_t row, size_t col, double* value);
ELA_API ela_status ela_matrix_copy_data(const ela_matrix* matrix, double* out);
ELA_API ela_status ela_matrix_row_label(const ela_matrix* matrix, size_t row, int* function_id, int* instance_id);
/* NULL when col is out of range. Valid until the matrix is freed. */
ELA_API const char* ela_matrix_column_name(const ela_matrix* matrix, size_t col);

/* Optional header renames (from[i] -> to[i]); pass count 0 for none. */
ELA_API ela_status ela_matrix_read_csv(const char* path, const char* const* from, const char* const* to, size_t count,
                                       ela_matrix** out);
ELA_API ela_status ela_matrix_write_csv(const ela_matrix* matrix, const char* path);
/* Reorders/subsets columns by name; missing names are a schema error. */
ELA_API ela_status ela_matrix_select_columns(const ela_matrix* matrix, const char* const* names, size_t count,
                                             ela_matrix** out);
ELA_API ela_status ela_matrix_concat_rows(const ela_matrix* top, const ela_matrix* bottom, ela_matrix** out);

/* ---- embedding --------------------------------------------------------- */

/* normalization: "none" or "minmax". */
ELA_API ela_status ela_model_fit(const ela_matrix* matrix, const char* normalization, ela_model** out);
ELA_API void ela_model_free(ela_model* model);
ELA_API int ela_model_rank_full(const ela_model* model);
ELA_API ela_status ela_model_singular_values(const ela_model* model, double* out, size_t count);
/* Fingerprints of every row of `matrix` (columns matched to the model by
 * name) at `rank`; output columns sv1..svR. */
ELA_API ela_status ela_model_fingerprints(const ela_model* model, const ela_matrix* matrix, int rank,
                                          ela_matrix** out);
/* Fingerprints of the training rows themselves (the first `rank` columns of
 * U, labeled with the training row labels). */
ELA_API ela_status ela_model_training_fingerprints(const ela_model* model, int rank, ela_matrix** out);
ELA_API ela_status ela_model_low_rank_error(const ela_model* model, const ela_matrix* matrix, int rank,
                                            double* error);
/* sqrt of the sum of squared singular values beyond `rank` (0..rank_full). */
ELA_API ela_status ela_model_tail_norm(const ela_model* model, int rank, double* value);
ELA_API ela_status ela_model_save_json(const ela_model* model, const char* path);
ELA_API ela_status ela_model_load_json(const char* path, ela_model** out);
ELA_API ela_status ela_cattell_scree(const double* singular_values, size_t count, int* components);

/* ---- correlation ------------------------------------------------------- */

ELA_API ela_status ela_corr_instances(const ela_matrix* matrix, ela_corr** out);
ELA_API ela_status ela_corr_features(const ela_matrix* matrix, ela_corr** out);
ELA_API void ela_corr_free(ela_corr* corr);
ELA_API size_t ela_corr_size(const ela_corr* corr);
/* *defined is 0 for masked (zero-variance) pairs; *value is then NaN. */
ELA_API ela_status ela_corr_get(const ela_corr* corr, size_t i, size_t j, double* value, int* defined);
ELA_API ela_status ela_corr_write_csv(const ela_corr* corr, const char* path);
/* block_size 0 disables problem-block gridlines. */
ELA_API ela_status ela_corr_write_svg(const ela_corr* corr, const char* path, const char* title, int block_size,
                                      int all_labels);
/* Per-problem summary; only for instance correlations. */
ELA_API ela_status ela_corr_write_report(const ela_corr* corr, double threshold, const char* path);

/* ---- classification ---------------------------------------------------- */

typedef struct ela_cv_config {
  const char* space;         /* "embedded" or "original" */
  const char* normalization; /* "none" or "minmax" */
  int rank;                  /* 0 = full rank of each training fold */
  const char* classifier;    /* "knn", "sgd" or "nearest_centroid" */
  int k;
  double learning_rate;
  int epochs;
  uint64_t seed;
} ela_cv_config;

ELA_API void ela_cv_config_default(ela_cv_config* config);
ELA_API ela_status ela_cv_evaluate(const ela_matrix* matrix, const ela_cv_config* config, ela_cv_report** out);
ELA_API void ela_cv_report_free(ela_cv_report* report);
ELA_API double ela_cv_report_mean_accuracy(const ela_cv_report* report);
ELA_API size_t ela_cv_report_fold_count(const ela_cv_report* report);
ELA_API ela_status ela_cv_report_fold(const ela_cv_report* report, size_t fold, int* instance_id, double* accuracy);
/* Writes all reports into one JSON document. */
ELA_API ela_status ela_cv_reports_write_json(const ela_cv_report* const* reports, size_t count, const char* path);
ELA_API ela_status ela_cv_export_folds(const ela_matrix* matrix, const ela_cv_config* config, const char* directory);

/* ---- plots ------------------------------------------------------------- */

ELA_API ela_status ela_line_plot_svg(const char* path, const char* title, const char* x_label, const char* y_label,
                                     size_t series_count, const char* const* names, const double* const* xs,
                                     const double* const* ys, const size_t* lengths);

#ifdef __cplusplus
}
#endif

#endif /* ELA_H */

#include "ela/ela.h"

#include "ela/analysis.hpp"
#include "ela/classify.hpp"
#include "ela/embedding.hpp"
#include "ela/features.hpp"
#include "ela/io.hpp"
#include "ela/problems.hpp"
#include "ela/sampling.hpp"

#include <cstring>
#include <limits>
#include <mutex>

struct ela_instance {
  ela::problems::ProblemInstance value;
};

struct ela_matrix {
  ela::LabeledMatrix value;
};

struct ela_model {
  ela::embedding::EmbeddingModel value;
};

struct ela_corr {
  ela::analysis::CorrelationMatrix value;
  std::vector<ela::InstanceLabel> instance_labels;  // empty for feature correlations
};

struct ela_cv_report {
  ela::classify::CvReport value;
};

namespace {

thread_local std::string last_error;

ela_status to_status(ela::ErrorCode code) {
  switch (code) {
    case ela::ErrorCode::invalid_argument: return ELA_ERR_INVALID_ARGUMENT;
    case ela::ErrorCode::unsupported: return ELA_ERR_UNSUPPORTED;
    case ela::ErrorCode::degenerate_sample: return ELA_ERR_DEGENERATE_SAMPLE;
    case ela::ErrorCode::rank_deficient: return ELA_ERR_RANK_DEFICIENT;
    case ela::ErrorCode::schema: return ELA_ERR_SCHEMA;
    case ela::ErrorCode::io: return ELA_ERR_IO;
    case ela::ErrorCode::numerical: return ELA_ERR_NUMERICAL;
  }
  return ELA_ERR_INTERNAL;
}

template <class F>
ela_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return ELA_OK;
  } catch (const ela::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ELA_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ELA_ERR_INTERNAL;
  }
}

template <class T>
const T& require(const T* p, const char* what) {
  if (p == nullptr) ela::fail(ela::ErrorCode::invalid_argument, std::string(what) + " is NULL");
  return *p;
}

void require_out(const void* p) {
  if (p == nullptr) ela::fail(ela::ErrorCode::invalid_argument, "output pointer is NULL");
}

std::string str(const char* s, const char* fallback) { return s ? std::string(s) : std::string(fallback); }

ela::features::FeatureOptions feature_options(const ela_feature_options* o) {
  ela::features::FeatureOptions out;
  if (o == nullptr) return out;
  out.sampler = ela::sampling::parse_sampler(str(o->sampler, "sobol"));
  out.sample_count = o->sample_count;
  out.replications = o->replications;
  return out;
}

ela::classify::CvConfig cv_config(const ela_cv_config* c) {
  ela::classify::CvConfig out;
  if (c == nullptr) return out;
  out.space = ela::classify::parse_space(str(c->space, "embedded"));
  out.normalization = ela::embedding::parse_normalization(str(c->normalization, "none"));
  out.rank = c->rank;
  out.classifier.kind = ela::classify::parse_classifier(str(c->classifier, "knn"));
  out.classifier.k = c->k;
  out.classifier.sgd.learning_rate = c->learning_rate;
  out.classifier.sgd.epochs = c->epochs;
  out.classifier.sgd.seed = c->seed;
  return out;
}

ela::LabeledMatrix model_columns(const ela::embedding::EmbeddingModel& model, const ela::LabeledMatrix& m) {
  return ela::io::conform_columns(m, model.column_labels());
}

struct CallbackState {
  std::mutex mutex;
  ela_warning_fn fn = nullptr;
  void* user = nullptr;
};

CallbackState& callback_state() {
  static CallbackState s;
  return s;
}

}  // namespace

extern "C" {

const char* ela_version(void) { return "1.0.0"; }

const char* ela_last_error(void) { return last_error.c_str(); }

const char* ela_status_name(ela_status status) {
  switch (status) {
    case ELA_OK: return "ok";
    case ELA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ELA_ERR_UNSUPPORTED: return "unsupported";
    case ELA_ERR_DEGENERATE_SAMPLE: return "degenerate sample";
    case ELA_ERR_RANK_DEFICIENT: return "rank deficient";
    case ELA_ERR_SCHEMA: return "schema error";
    case ELA_ERR_IO: return "I/O error";
    case ELA_ERR_NUMERICAL: return "numerical failure";
    case ELA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void ela_set_warning_callback(ela_warning_fn callback, void* user_data) {
  auto& s = callback_state();
  {
    std::lock_guard lock(s.mutex);
    s.fn = callback;
    s.user = user_data;
  }
  if (callback == nullptr) {
    ela::set_warning_handler(nullptr);
    return;
  }
  ela::set_warning_handler([](const std::string& msg) {
    auto& st = callback_state();
    std::lock_guard lock(st.mutex);
    if (st.fn) st.fn(msg.c_str(), st.user);
  });
}

ela_status ela_instance_create(int function_id, int instance_id, int dimension, ela_instance** out) {
  return guarded([&] {
    require_out(out);
    *out = new ela_instance{ela::problems::make_instance(function_id, instance_id, dimension)};
  });
}

void ela_instance_free(ela_instance* instance) { delete instance; }

int ela_instance_dimension(const ela_instance* instance) { return instance ? instance->value.dimension() : 0; }

ela_status ela_instance_evaluate(const ela_instance* instance, const double* x, size_t dimension, double* value) {
  return guarded([&] {
    const auto& inst = require(instance, "instance");
    require_out(value);
    if (x == nullptr) ela::fail(ela::ErrorCode::invalid_argument, "x is NULL");
    *value = inst.value.evaluate(std::span<const double>(x, dimension));
  });
}

ela_status ela_instance_optimum(const ela_instance* instance, double* x, size_t dimension, double* value) {
  return guarded([&] {
    const auto& inst = require(instance, "instance");
    require_out(x);
    require_out(value);
    if (dimension != static_cast<size_t>(inst.value.dimension()))
      ela::fail(ela::ErrorCode::invalid_argument, "dimension does not match the instance");
    for (size_t i = 0; i < dimension; ++i) x[i] = inst.value.x_shift()[static_cast<Eigen::Index>(i)];
    *value = inst.value.f_shift();
  });
}

static ela_status copy_points(const ela::Matrix& m, double* out) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
  return ELA_OK;
}

ela_status ela_sobol_points(int dimension, int count, uint64_t seed, double* out) {
  return guarded([&] {
    require_out(out);
    copy_points(ela::sampling::sobol_points(dimension, count, seed), out);
  });
}

ela_status ela_uniform_points(int dimension, int count, uint64_t seed, double* out) {
  return guarded([&] {
    require_out(out);
    copy_points(ela::sampling::uniform_points(dimension, count, seed), out);
  });
}

ela_status ela_write_design_csv(const ela_instance* instance, const char* sampler, int count, uint64_t seed,
                                const char* path) {
  return guarded([&] {
    const auto& inst = require(instance, "instance");
    const auto sample =
        ela::sampling::build_design(inst.value, ela::sampling::parse_sampler(str(sampler, "sobol")), count, seed);
    auto out = ela::io::open_output(str(path, ""));
    ela::sampling::write_sample_csv(sample, out);
  });
}

size_t ela_feature_count(void) { return ela::features::kFeatureCount; }

const char* ela_feature_name(size_t index) {
  return index < ela::features::kFeatureCount ? ela::features::kSchema[index].name.data() : nullptr;
}

const char* ela_feature_group(size_t index) {
  return index < ela::features::kFeatureCount ? ela::features::to_string(ela::features::kSchema[index].group).data()
                                              : nullptr;
}

void ela_feature_options_default(ela_feature_options* options) {
  if (options == nullptr) return;
  const ela::features::FeatureOptions d;
  options->sampler = "sobol";
  options->sample_count = d.sample_count;
  options->replications = d.replications;
}

ela_status ela_feature_vector(const ela_instance* instance, const ela_feature_options* options, uint64_t seed,
                              double* out) {
  return guarded([&] {
    const auto& inst = require(instance, "instance");
    require_out(out);
    const auto v = ela::features::feature_vector(inst.value, feature_options(options), seed);
    std::copy(v.values.begin(), v.values.end(), out);
  });
}

uint64_t ela_instance_seed(uint64_t seed, int function_id, int instance_id) {
  return ela::features::instance_seed(seed, {function_id, instance_id});
}

ela_status ela_feature_matrix_compute(const int* function_ids, size_t function_count, const int* instance_ids,
                                      size_t instance_count, int dimension, const ela_feature_options* options,
                                      uint64_t seed, unsigned threads, ela_matrix** out) {
  return guarded([&] {
    require_out(out);
    if ((function_count && !function_ids) || (instance_count && !instance_ids))
      ela::fail(ela::ErrorCode::invalid_argument, "id array is NULL");
    const auto fo = feature_options(options);
    // fail before materializing the suite
    if (fo.sampler == ela::sampling::Sampler::sobol && dimension > ela::sampling::max_sobol_dimension())
      ela::fail(ela::ErrorCode::unsupported, "Sobol' points are available up to dimension " +
                                                 std::to_string(ela::sampling::max_sobol_dimension()));
    const auto suite = ela::features::make_suite(std::vector<int>(function_ids, function_ids + function_count),
                                                 std::vector<int>(instance_ids, instance_ids + instance_count),
                                                 dimension);
    *out = new ela_matrix{ela::features::feature_matrix(suite, fo, seed, threads)};
  });
}

ela_status ela_matrix_create(size_t rows, size_t cols, const int* function_ids, const int* instance_ids,
                             const char* const* column_names, const double* data, ela_matrix** out) {
  return guarded([&] {
    require_out(out);
    if ((rows && (!function_ids || !instance_ids)) || (cols && !column_names) || (rows != 0 && cols != 0 && !data))
      ela::fail(ela::ErrorCode::invalid_argument, "matrix input array is NULL");
    ela::LabeledMatrix m;
    for (size_t i = 0; i < rows; ++i) m.rows.push_back({function_ids[i], instance_ids[i]});
    for (size_t j = 0; j < cols; ++j) {
      if (!column_names[j]) ela::fail(ela::ErrorCode::invalid_argument, "column name is NULL");
      m.columns.emplace_back(column_names[j]);
    }
    m.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j)
        m.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data[i * cols + j];
    m.validate();
    *out = new ela_matrix{std::move(m)};
  });
}

void ela_matrix_free(ela_matrix* matrix) { delete matrix; }

size_t ela_matrix_rows(const ela_matrix* matrix) {
  return matrix ? static_cast<size_t>(matrix->value.row_count()) : 0;
}

size_t ela_matrix_cols(const ela_matrix* matrix) {
  return matrix ? static_cast<size_t>(matrix->value.column_count()) : 0;
}

ela_status ela_matrix_get(const ela_matrix* matrix, size_t row, size_t col, double* value) {
  return guarded([&] {
    const auto& m = require(matrix, "matrix").value;
    require_out(value);
    if (row >= static_cast<size_t>(m.row_count()) || col >= static_cast<size_t>(m.column_count()))
      ela::fail(ela::ErrorCode::invalid_argument, "matrix index out of range");
    *value = m.data(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  });
}

ela_status ela_matrix_copy_data(const ela_matrix* matrix, double* out) {
  return guarded([&] {
    const auto& m = require(matrix, "matrix").value;
    require_out(out);
    copy_points(m.data, out);
  });
}

ela_status ela_matrix_row_label(const ela_matrix* matrix, size_t row, int* function_id, int* instance_id) {
  return guarded([&] {
    const auto& m = require(matrix, "matrix").value;
    require_out(function_id);
    require_out(instance_id);
    if (row >= m.rows.size()) ela::fail(ela::ErrorCode::invalid_argument, "row index out of range");
    *function_id = m.rows[row].function_id;
    *instance_id = m.rows[row].instance_id;
  });
}

const char* ela_matrix_column_name(const ela_matrix* matrix, size_t col) {
  if (!matrix || col >= matrix->value.columns.size()) return nullptr;
  return matrix->value.columns[col].c_str();
}

ela_status ela_matrix_read_csv(const char* path, const char* const* from, const char* const* to, size_t count,
                               ela_matrix** out) {
  return guarded([&] {
    require_out(out);
    ela::io::ColumnMapping mapping;
    for (size_t i = 0; i < count; ++i) {
      if (!from || !to || !from[i] || !to[i]) ela::fail(ela::ErrorCode::invalid_argument, "column mapping is NULL");
      mapping[from[i]] = to[i];
    }
    *out = new ela_matrix{ela::io::read_matrix_csv(str(path, ""), mapping)};
  });
}

ela_status ela_matrix_write_csv(const ela_matrix* matrix, const char* path) {
  return guarded([&] { ela::io::write_matrix_csv(require(matrix, "matrix").value, str(path, "")); });
}

ela_status ela_matrix_select_columns(const ela_matrix* matrix, const char* const* names, size_t count,
                                     ela_matrix** out) {
  return guarded([&] {
    const auto& m = require(matrix, "matrix").value;
    require_out(out);
    std::vector<std::string> wanted;
    for (size_t i = 0; i < count; ++i) {
      if (!names || !names[i]) ela::fail(ela::ErrorCode::invalid_argument, "column name is NULL");
      wanted.emplace_back(names[i]);
    }
    *out = new ela_matrix{ela::io::conform_columns(m, wanted)};
  });
}

ela_status ela_matrix_concat_rows(const ela_matrix* top, const ela_matrix* bottom, ela_matrix** out) {
  return guarded([&] {
    require_out(out);
    *out = new ela_matrix{ela::concat_rows(require(top, "top").value, require(bottom, "bottom").value)};
  });
}

ela_status ela_model_fit(const ela_matrix* matrix, const char* normalization, ela_model** out) {
  return guarded([&] {
    require_out(out);
    *out = new ela_model{ela::embedding::fit(require(matrix, "matrix").value,
                                             ela::embedding::parse_normalization(str(normalization, "none")))};
  });
}

void ela_model_free(ela_model* model) { delete model; }

int ela_model_rank_full(const ela_model* model) { return model ? model->value.rank_full() : 0; }

ela_status ela_model_singular_values(const ela_model* model, double* out, size_t count) {
  return guarded([&] {
    const auto& s = require(model, "model").value.singular_values();
    require_out(out);
    if (count != static_cast<size_t>(s.size()))
      ela::fail(ela::ErrorCode::invalid_argument, "expected room for " + std::to_string(s.size()) + " values");
    std::copy(s.begin(), s.end(), out);
  });
}

ela_status ela_model_fingerprints(const ela_model* model, const ela_matrix* matrix, int rank, ela_matrix** out) {
  return guarded([&] {
    require_out(out);
    *out = new ela_matrix{
        ela::embedding::project_rows(require(model, "model").value, require(matrix, "matrix").value, rank)};
  });
}

ela_status ela_model_training_fingerprints(const ela_model* model, int rank, ela_matrix** out) {
  return guarded([&] {
    const auto& mdl = require(model, "model").value;
    require_out(out);
    if (rank < 1 || rank > mdl.rank_full())
      ela::fail(ela::ErrorCode::invalid_argument, "rank must be in 1.." + std::to_string(mdl.rank_full()));
    *out = new ela_matrix{{mdl.row_labels(), ela::embedding::fingerprint_columns(rank), mdl.u().leftCols(rank)}};
  });
}

ela_status ela_model_low_rank_error(const ela_model* model, const ela_matrix* matrix, int rank, double* error) {
  return guarded([&] {
    const auto& mdl = require(model, "model").value;
    require_out(error);
    *error = ela::embedding::low_rank_error(mdl, model_columns(mdl, require(matrix, "matrix").value).data, rank);
  });
}

ela_status ela_model_tail_norm(const ela_model* model, int rank, double* value) {
  return guarded([&] {
    const auto& mdl = require(model, "model").value;
    require_out(value);
    *value = ela::embedding::tail_singular_norm(mdl, rank);
  });
}

ela_status ela_model_save_json(const ela_model* model, const char* path) {
  return guarded([&] { ela::io::write_model_json(require(model, "model").value, str(path, "")); });
}

ela_status ela_model_load_json(const char* path, ela_model** out) {
  return guarded([&] {
    require_out(out);
    *out = new ela_model{ela::io::read_model_json(str(path, ""))};
  });
}

ela_status ela_cattell_scree(const double* singular_values, size_t count, int* components) {
  return guarded([&] {
    require_out(components);
    if (count && !singular_values) ela::fail(ela::ErrorCode::invalid_argument, "singular values are NULL");
    *components = ela::embedding::cattell_scree(std::span<const double>(singular_values, count));
  });
}

ela_status ela_corr_instances(const ela_matrix* matrix, ela_corr** out) {
  return guarded([&] {
    const auto& m = require(matrix, "matrix").value;
    require_out(out);
    *out = new ela_corr{ela::analysis::instance_correlation(m), m.rows};
  });
}

ela_status ela_corr_features(const ela_matrix* matrix, ela_corr** out) {
  return guarded([&] {
    require_out(out);
    *out = new ela_corr{ela::analysis::feature_correlation(require(matrix, "matrix").value), {}};
  });
}

void ela_corr_free(ela_corr* corr) { delete corr; }

size_t ela_corr_size(const ela_corr* corr) { return corr ? static_cast<size_t>(corr->value.size()) : 0; }

ela_status ela_corr_get(const ela_corr* corr, size_t i, size_t j, double* value, int* defined) {
  return guarded([&] {
    const auto& c = require(corr, "correlation").value;
    require_out(value);
    require_out(defined);
    if (i >= static_cast<size_t>(c.size()) || j >= static_cast<size_t>(c.size()))
      ela::fail(ela::ErrorCode::invalid_argument, "correlation index out of range");
    const auto v = c.at(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    *defined = v ? 1 : 0;
    *value = v ? *v : std::numeric_limits<double>::quiet_NaN();
  });
}

ela_status ela_corr_write_csv(const ela_corr* corr, const char* path) {
  return guarded([&] { ela::io::write_correlation_csv(require(corr, "correlation").value, str(path, "")); });
}

ela_status ela_corr_write_svg(const ela_corr* corr, const char* path, const char* title, int block_size,
                              int all_labels) {
  return guarded([&] {
    ela::analysis::HeatmapOptions options;
    options.title = str(title, "");
    options.block_size = block_size;
    options.all_labels = all_labels != 0;
    ela::analysis::render_heatmap(require(corr, "correlation").value, str(path, ""), options);
  });
}

ela_status ela_corr_write_report(const ela_corr* corr, double threshold, const char* path) {
  return guarded([&] {
    const auto& c = require(corr, "correlation");
    if (c.instance_labels.empty())
      ela::fail(ela::ErrorCode::invalid_argument, "report needs an instance correlation matrix");
    const auto groups = ela::analysis::correlation_report(c.value, c.instance_labels, threshold);
    auto out = ela::io::open_output(str(path, ""));
    ela::io::write_correlation_report(groups, threshold, out);
  });
}

void ela_cv_config_default(ela_cv_config* config) {
  if (config == nullptr) return;
  const ela::classify::CvConfig d;
  config->space = "embedded";
  config->normalization = "none";
  config->rank = d.rank;
  config->classifier = "knn";
  config->k = d.classifier.k;
  config->learning_rate = d.classifier.sgd.learning_rate;
  config->epochs = d.classifier.sgd.epochs;
  config->seed = d.classifier.sgd.seed;
}

ela_status ela_cv_evaluate(const ela_matrix* matrix, const ela_cv_config* config, ela_cv_report** out) {
  return guarded([&] {
    require_out(out);
    *out = new ela_cv_report{ela::classify::evaluate_cv(require(matrix, "matrix").value, cv_config(config))};
  });
}

void ela_cv_report_free(ela_cv_report* report) { delete report; }

double ela_cv_report_mean_accuracy(const ela_cv_report* report) {
  return report ? report->value.mean_accuracy : std::numeric_limits<double>::quiet_NaN();
}

size_t ela_cv_report_fold_count(const ela_cv_report* report) {
  return report ? report->value.per_fold_accuracy.size() : 0;
}

ela_status ela_cv_report_fold(const ela_cv_report* report, size_t fold, int* instance_id, double* accuracy) {
  return guarded([&] {
    const auto& r = require(report, "report").value;
    require_out(instance_id);
    require_out(accuracy);
    if (fold >= r.per_fold_accuracy.size()) ela::fail(ela::ErrorCode::invalid_argument, "fold index out of range");
    *instance_id = r.fold_instance_ids[fold];
    *accuracy = r.per_fold_accuracy[fold];
  });
}

ela_status ela_cv_reports_write_json(const ela_cv_report* const* reports, size_t count, const char* path) {
  return guarded([&] {
    std::vector<ela::classify::CvReport> list;
    for (size_t i = 0; i < count; ++i) list.push_back(require(reports ? reports[i] : nullptr, "report").value);
    ela::io::write_cv_reports(list, str(path, ""));
  });
}

ela_status ela_cv_export_folds(const ela_matrix* matrix, const ela_cv_config* config, const char* directory) {
  return guarded(
      [&] { ela::io::export_folds(require(matrix, "matrix").value, cv_config(config), str(directory, "")); });
}

ela_status ela_line_plot_svg(const char* path, const char* title, const char* x_label, const char* y_label,
                             size_t series_count, const char* const* names, const double* const* xs,
                             const double* const* ys, const size_t* lengths) {
  return guarded([&] {
    if (series_count && (!names || !xs || !ys || !lengths))
      ela::fail(ela::ErrorCode::invalid_argument, "series arrays are NULL");
    std::vector<ela::analysis::LineSeries> series;
    for (size_t s = 0; s < series_count; ++s) {
      if (lengths[s] && (!xs[s] || !ys[s])) ela::fail(ela::ErrorCode::invalid_argument, "series data is NULL");
      series.push_back({str(names[s], ""), std::vector<double>(xs[s], xs[s] + lengths[s]),
                        std::vector<double>(ys[s], ys[s] + lengths[s])});
    }
    ela::analysis::render_line_plot(series, str(path, ""), {str(title, ""), str(x_label, ""), str(y_label, "")});
  });
}

}  // extern "C"

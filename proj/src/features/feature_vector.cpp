#include "ela/features.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace ela::features {

std::string_view to_string(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::disp: return "disp";
    case FeatureGroup::ic: return "ic";
    case FeatureGroup::nbc: return "nbc";
    case FeatureGroup::ela_meta: return "ela_meta";
    case FeatureGroup::ela_distr: return "ela_distr";
  }
  return "unknown";
}

std::vector<std::string> feature_names() {
  std::vector<std::string> names;
  for (const auto& info : kSchema) names.emplace_back(info.name);
  return names;
}

int feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kSchema.size(); ++i)
    if (kSchema[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> group_members(FeatureGroup group) {
  std::vector<std::string> names;
  for (const auto& info : kSchema)
    if (info.group == group) names.emplace_back(info.name);
  return names;
}

double FeatureVector::operator[](std::string_view name) const {
  const int i = feature_index(name);
  if (i < 0) fail(ErrorCode::schema, "unknown feature '" + std::string(name) + "'");
  return values[static_cast<std::size_t>(i)];
}

bool FeatureVector::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

FeatureVector compute_features(const sampling::Sample& sample) {
  FeatureVector fv;
  auto it = fv.values.begin();
  const auto disp = dispersion(sample);
  for (const auto* group : {&disp.ratio_mean, &disp.ratio_median, &disp.diff_mean, &disp.diff_median})
    it = std::copy(group->begin(), group->end(), it);

  const auto ic = information_content(sample);
  for (const double v : {ic.h_max, ic.eps_s, ic.eps_max, ic.eps_ratio, ic.m0}) *it++ = v;

  const auto nbc = nearest_better_clustering(sample);
  for (const double v : {nbc.nn_nb_sd_ratio, nbc.nn_nb_mean_ratio, nbc.nn_nb_cor, nbc.dist_ratio_coeff_var,
                         nbc.nb_fitness_cor})
    *it++ = v;

  const auto meta = meta_model(sample);
  for (const double v : {meta.lin_simple_adj_r2, meta.lin_simple_intercept, meta.lin_simple_coef_min,
                         meta.lin_simple_coef_max, meta.lin_simple_coef_max_by_min, meta.lin_w_interact_adj_r2,
                         meta.quad_simple_adj_r2, meta.quad_simple_cond, meta.quad_w_interact_adj_r2})
    *it++ = v;

  const auto distr = distribution(sample.fitness);
  for (const double v : {distr.skewness, distr.kurtosis, distr.number_of_peaks}) *it++ = v;
  return fv;
}

std::uint64_t replication_seed(std::uint64_t seed, int replication, sampling::Sampler sampler) {
  const std::uint64_t s = derive_seed({seed, static_cast<std::uint64_t>(replication)});
  return sampler == sampling::Sampler::sobol ? s % (std::uint64_t{1} << 20) : s;
}

std::uint64_t instance_seed(std::uint64_t base_seed, const InstanceLabel& label) {
  return derive_seed({base_seed, static_cast<std::uint64_t>(label.function_id),
                      static_cast<std::uint64_t>(label.instance_id)});
}

FeatureVector median_aggregate(const std::vector<FeatureVector>& replications) {
  if (replications.empty()) fail(ErrorCode::invalid_argument, "no replications to aggregate");
  FeatureVector out;
  std::vector<double> column(replications.size());
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    for (std::size_t r = 0; r < replications.size(); ++r) column[r] = replications[r].values[f];
    out.values[f] = median(column);
  }
  return out;
}

FeatureVector feature_vector(const problems::ProblemInstance& instance, const FeatureOptions& options,
                             std::uint64_t seed) {
  if (options.replications < 1) fail(ErrorCode::invalid_argument, "replications must be at least 1");
  std::vector<FeatureVector> kept;
  std::optional<Error> first_failure;
  int failed = 0;
  for (int r = 0; r < options.replications; ++r) {
    const auto rep_seed = replication_seed(seed, r, options.sampler);
    try {
      const auto sample = sampling::build_design(instance, options.sampler, options.sample_count, rep_seed);
      FeatureVector fv = compute_features(sample);
      if (!fv.all_finite()) {
        std::string names;
        for (std::size_t f = 0; f < kFeatureCount; ++f)
          if (!std::isfinite(fv.values[f])) names += (names.empty() ? "" : ", ") + std::string(kSchema[f].name);
        fail(ErrorCode::numerical, "non-finite feature(s): " + names);
      }
      kept.push_back(fv);
    } catch (const Error& e) {
      ++failed;
      if (!first_failure) first_failure = e;
      warn(ela::to_string(instance.label()) + ": replication " + std::to_string(r) + " dropped: " + e.what());
    }
  }
  if (2 * failed > options.replications)
    fail(first_failure->code(), ela::to_string(instance.label()) + ": " + std::to_string(failed) + " of " +
                                    std::to_string(options.replications) + " replications failed (first: " +
                                    first_failure->what() + ")");
  return median_aggregate(kept);
}

std::vector<problems::ProblemInstance> make_suite(const std::vector<int>& function_ids,
                                                  const std::vector<int>& instance_ids, int dimension) {
  std::vector<problems::ProblemInstance> suite;
  for (const int f : function_ids)
    for (const int i : instance_ids) suite.push_back(problems::make_instance(f, i, dimension));
  return suite;
}

LabeledMatrix feature_matrix(const std::vector<problems::ProblemInstance>& suite, const FeatureOptions& options,
                             std::uint64_t base_seed, unsigned threads) {
  if (suite.empty()) fail(ErrorCode::invalid_argument, "feature matrix needs a non-empty suite");
  LabeledMatrix out;
  out.columns = feature_names();
  out.data.resize(static_cast<Eigen::Index>(suite.size()), static_cast<Eigen::Index>(kFeatureCount));
  for (const auto& p : suite) out.rows.push_back(p.label());

  std::vector<std::optional<Error>> errors(suite.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < suite.size(); i = next++) {
      try {
        const auto fv = feature_vector(suite[i], options, instance_seed(base_seed, suite[i].label()));
        for (std::size_t f = 0; f < kFeatureCount; ++f)
          out.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) = fv.values[f];
      } catch (const Error& e) {
        errors[i] = e;
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(suite.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::optional<ErrorCode> code;
  std::string message;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    if (!errors[i]) continue;
    if (!code) code = errors[i]->code();
    const std::string label = ela::to_string(suite[i].label());
    std::string what = errors[i]->what();
    if (!what.starts_with(label + ":")) what = label + ": " + what;
    message += (message.empty() ? "" : "; ") + what;
  }
  if (code) fail(*code, message);
  return out;
}

}  // namespace ela::features

#pragma once

#include "ela/common.hpp"
#include "ela/problems.hpp"
#include "ela/sampling.hpp"

#include <array>
#include <string_view>

namespace ela::features {

enum class FeatureGroup { disp, ic, nbc, ela_meta, ela_distr };

std::string_view to_string(FeatureGroup group);

struct FeatureInfo {
  std::string_view name;
  FeatureGroup group;
};

inline constexpr std::size_t kFeatureCount = 38;

// Frozen column order of the feature matrix. Names follow flacco's
// conventions; changing this table changes every serialized artifact.
inline constexpr std::array<FeatureInfo, kFeatureCount> kSchema{{
    {"disp.ratio_mean_02", FeatureGroup::disp},
    {"disp.ratio_mean_05", FeatureGroup::disp},
    {"disp.ratio_mean_10", FeatureGroup::disp},
    {"disp.ratio_mean_25", FeatureGroup::disp},
    {"disp.ratio_median_02", FeatureGroup::disp},
    {"disp.ratio_median_05", FeatureGroup::disp},
    {"disp.ratio_median_10", FeatureGroup::disp},
    {"disp.ratio_median_25", FeatureGroup::disp},
    {"disp.diff_mean_02", FeatureGroup::disp},
    {"disp.diff_mean_05", FeatureGroup::disp},
    {"disp.diff_mean_10", FeatureGroup::disp},
    {"disp.diff_mean_25", FeatureGroup::disp},
    {"disp.diff_median_02", FeatureGroup::disp},
    {"disp.diff_median_05", FeatureGroup::disp},
    {"disp.diff_median_10", FeatureGroup::disp},
    {"disp.diff_median_25", FeatureGroup::disp},
    {"ic.h_max", FeatureGroup::ic},
    {"ic.eps_s", FeatureGroup::ic},
    {"ic.eps_max", FeatureGroup::ic},
    {"ic.eps_ratio", FeatureGroup::ic},
    {"ic.m0", FeatureGroup::ic},
    {"nbc.nn_nb.sd_ratio", FeatureGroup::nbc},
    {"nbc.nn_nb.mean_ratio", FeatureGroup::nbc},
    {"nbc.nn_nb.cor", FeatureGroup::nbc},
    {"nbc.dist_ratio.coeff_var", FeatureGroup::nbc},
    {"nbc.nb_fitness.cor", FeatureGroup::nbc},
    {"ela_meta.lin_simple.adj_r2", FeatureGroup::ela_meta},
    {"ela_meta.lin_simple.intercept", FeatureGroup::ela_meta},
    {"ela_meta.lin_simple.coef.min", FeatureGroup::ela_meta},
    {"ela_meta.lin_simple.coef.max", FeatureGroup::ela_meta},
    {"ela_meta.lin_simple.coef.max_by_min", FeatureGroup::ela_meta},
    {"ela_meta.lin_w_interact.adj_r2", FeatureGroup::ela_meta},
    {"ela_meta.quad_simple.adj_r2", FeatureGroup::ela_meta},
    {"ela_meta.quad_simple.cond", FeatureGroup::ela_meta},
    {"ela_meta.quad_w_interact.adj_r2", FeatureGroup::ela_meta},
    {"ela_distr.skewness", FeatureGroup::ela_distr},
    {"ela_distr.kurtosis", FeatureGroup::ela_distr},
    {"ela_distr.number_of_peaks", FeatureGroup::ela_distr},
}};

std::vector<std::string> feature_names();
/// Index into kSchema, or -1.
int feature_index(std::string_view name);
/// Names of all schema features in a group, in schema order.
std::vector<std::string> group_members(FeatureGroup group);

/// 38 values in kSchema order.
struct FeatureVector {
  std::array<double, kFeatureCount> values{};

  double operator[](std::string_view name) const;
  bool all_finite() const;
};

// --- per-group computations -------------------------------------------------

struct DistributionFeatures {
  double skewness;
  double kurtosis;  // excess
  double number_of_peaks;
};

/// Moment-based skewness and excess kurtosis (biased estimators) plus the
/// number of modes of a Gaussian KDE (Silverman bandwidth, 512-point grid over
/// [min - 3h, max + 3h]; a mode counts when its basin holds > 0.5% of mass).
DistributionFeatures distribution(const Vector& fitness);

struct MetaModelFeatures {
  double lin_simple_adj_r2;
  double lin_simple_intercept;
  double lin_simple_coef_min;
  double lin_simple_coef_max;
  double lin_simple_coef_max_by_min;
  double lin_w_interact_adj_r2;
  double quad_simple_adj_r2;
  double quad_simple_cond;
  double quad_w_interact_adj_r2;
};

MetaModelFeatures meta_model(const sampling::Sample& sample);

inline constexpr std::array<double, 4> kDispersionQuantiles{0.02, 0.05, 0.10, 0.25};

struct DispersionFeatures {
  // Indexed like kDispersionQuantiles.
  std::array<double, 4> ratio_mean;
  std::array<double, 4> ratio_median;
  std::array<double, 4> diff_mean;
  std::array<double, 4> diff_median;
};

/// Size of the best-q subset used by the dispersion features.
Eigen::Index quantile_subset_size(double q, Eigen::Index count);

DispersionFeatures dispersion(const sampling::Sample& sample);

struct InformationContentFeatures {
  double h_max;
  double eps_s;      // log10
  double eps_max;    // log10
  double eps_ratio;  // log10
  double m0;
};

/// Symbol sequence over {-1, 0, 1} of the rate-of-change along a walk.
std::vector<int> ic_symbols(const std::vector<double>& rates, double epsilon);
/// Entropy (base 6) of the six unequal two-symbol blocks.
double ic_entropy(const std::vector<int>& symbols);
/// Partial information content: alternation-reduced length / symbol count.
double ic_partial_information(const std::vector<int>& symbols);
/// The sensitivity grid: 0 followed by 100 log-spaced values in [1e-5, 1e15].
std::vector<double> ic_epsilon_grid();
/// Greedy nearest-neighbour tour starting at point 0.
std::vector<Eigen::Index> nearest_neighbour_tour(const Matrix& points);

InformationContentFeatures information_content(const sampling::Sample& sample);

struct NearestBetterFeatures {
  double nn_nb_sd_ratio;
  double nn_nb_mean_ratio;
  double nn_nb_cor;
  double dist_ratio_coeff_var;
  double nb_fitness_cor;
};

/// Per-point nearest-neighbour and nearest-better distances. `nearest_better`
/// is -1 for points without a strictly better point.
struct NearestBetterDistances {
  Vector nn_distance;
  Vector nb_distance;  // NaN where undefined
  std::vector<Eigen::Index> nearest_better;
};

NearestBetterDistances nearest_better_distances(const sampling::Sample& sample);
NearestBetterFeatures nearest_better_clustering(const sampling::Sample& sample);

/// All five groups on one design.
FeatureVector compute_features(const sampling::Sample& sample);

struct FeatureOptions {
  sampling::Sampler sampler = sampling::Sampler::sobol;
  int sample_count = 1250;
  int replications = 100;
};

/// Seed of replication `replication` of a feature run with the given seed.
/// Sobol' seeds are skip-ahead offsets below 2^20.
std::uint64_t replication_seed(std::uint64_t seed, int replication, sampling::Sampler sampler);

/// Median over replications of the per-design feature vectors. Failing
/// replications are dropped with a warning; more than half failing is an error.
FeatureVector feature_vector(const problems::ProblemInstance& instance, const FeatureOptions& options,
                             std::uint64_t seed);

/// Per-instance seed used by feature_matrix.
std::uint64_t instance_seed(std::uint64_t base_seed, const InstanceLabel& label);

/// Median of per-replication vectors (exposed for testing).
FeatureVector median_aggregate(const std::vector<FeatureVector>& replications);

/// One row per suite entry, in suite order; columns follow kSchema.
/// `threads` = 0 uses the hardware concurrency.
LabeledMatrix feature_matrix(const std::vector<problems::ProblemInstance>& suite, const FeatureOptions& options,
                             std::uint64_t base_seed, unsigned threads = 0);

/// Problem-major suite: for each function id, each instance id.
std::vector<problems::ProblemInstance> make_suite(const std::vector<int>& function_ids,
                                                  const std::vector<int>& instance_ids, int dimension);

}  // namespace ela::features

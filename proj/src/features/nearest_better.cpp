#include "ela/features.hpp"

#include <cmath>
#include <limits>

namespace ela::features {

namespace {

double sample_sd(const std::vector<double>& v) {
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// NaN when either side has zero variance.
double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

NearestBetterDistances nearest_better_distances(const sampling::Sample& sample) {
  const auto n = sample.size();
  NearestBetterDistances out;
  out.nn_distance = Vector::Constant(n, std::numeric_limits<double>::infinity());
  out.nb_distance = Vector::Constant(n, std::numeric_limits<double>::infinity());
  out.nearest_better.assign(static_cast<std::size_t>(n), -1);

  const Matrix& x = sample.points;
  const Vector& y = sample.fitness;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (x.row(i) - x.row(j)).norm();
      if (d < out.nn_distance[i]) out.nn_distance[i] = d;
      if (d < out.nn_distance[j]) out.nn_distance[j] = d;
      if (y[j] < y[i] && d < out.nb_distance[i]) {
        out.nb_distance[i] = d;
        out.nearest_better[static_cast<std::size_t>(i)] = j;
      }
      if (y[i] < y[j] && d < out.nb_distance[j]) {
        out.nb_distance[j] = d;
        out.nearest_better[static_cast<std::size_t>(j)] = i;
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    if (out.nearest_better[static_cast<std::size_t>(i)] < 0) out.nb_distance[i] = std::numeric_limits<double>::quiet_NaN();
  return out;
}

NearestBetterFeatures nearest_better_clustering(const sampling::Sample& sample) {
  const auto n = sample.size();
  if (n < 100) fail(ErrorCode::invalid_argument, "nearest better clustering needs at least 100 samples");
  if (sample.fitness.minCoeff() == sample.fitness.maxCoeff())
    fail(ErrorCode::degenerate_sample, "nearest better clustering: all fitness values are equal");

  const auto dist = nearest_better_distances(sample);
  std::vector<double> nn, nb, ratio;
  std::vector<double> indegree(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto target = dist.nearest_better[static_cast<std::size_t>(i)];
    if (target < 0) continue;
    indegree[static_cast<std::size_t>(target)] += 1.0;
    nn.push_back(dist.nn_distance[i]);
    nb.push_back(dist.nb_distance[i]);
    if (dist.nn_distance[i] > 0.0) ratio.push_back(dist.nb_distance[i] / dist.nn_distance[i]);
  }
  if (nn.size() < 2) fail(ErrorCode::degenerate_sample, "nearest better clustering: fewer than two points have a better neighbour");

  NearestBetterFeatures out{};
  out.nn_nb_sd_ratio = sample_sd(nn) / sample_sd(nb);
  out.nn_nb_mean_ratio = mean_of(nn) / mean_of(nb);
  out.nn_nb_cor = correlation(nn, nb);
  out.dist_ratio_coeff_var = ratio.size() < 2 ? std::numeric_limits<double>::quiet_NaN() : sample_sd(ratio) / mean_of(ratio);
  const std::vector<double> fitness(sample.fitness.data(), sample.fitness.data() + n);
  out.nb_fitness_cor = correlation(fitness, indegree);
  return out;
}

}  // namespace ela::features

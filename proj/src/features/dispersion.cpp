#include "ela/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ela::features {

namespace {

struct DistanceSummary {
  double mean;
  double median;
};

DistanceSummary pairwise_summary(const Matrix& points, const std::vector<Eigen::Index>& subset) {
  std::vector<double> d;
  d.reserve(subset.size() * (subset.size() - 1) / 2);
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b) d.push_back((points.row(subset[a]) - points.row(subset[b])).norm());
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  return {mean, median(std::move(d))};
}

}  // namespace

Eigen::Index quantile_subset_size(double q, Eigen::Index count) {
  // Guard against q * count landing a hair above an integer.
  return static_cast<Eigen::Index>(std::ceil(q * static_cast<double>(count) - 1e-9));
}

DispersionFeatures dispersion(const sampling::Sample& sample) {
  const auto n = sample.size();
  if (n < 100) fail(ErrorCode::invalid_argument, "dispersion needs at least 100 samples");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return sample.fitness[a] < sample.fitness[b]; });

  const DistanceSummary all = pairwise_summary(sample.points, order);
  DispersionFeatures out{};
  for (std::size_t k = 0; k < kDispersionQuantiles.size(); ++k) {
    const auto size = quantile_subset_size(kDispersionQuantiles[k], n);
    if (size < 2) fail(ErrorCode::degenerate_sample, "dispersion: quantile subset has fewer than 2 points");
    const std::vector<Eigen::Index> best(order.begin(), order.begin() + size);
    const DistanceSummary sub = pairwise_summary(sample.points, best);
    out.ratio_mean[k] = sub.mean / all.mean;
    out.ratio_median[k] = sub.median / all.median;
    out.diff_mean[k] = sub.mean - all.mean;
    out.diff_median[k] = sub.median - all.median;
  }
  return out;
}

}  // namespace ela::features

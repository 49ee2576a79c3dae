#include "ela/features.hpp"

#include <algorithm>
#include <cmath>

namespace ela::features {

namespace {

constexpr int kGridSize = 512;
constexpr double kMinPeakMass = 0.005;

double quantile_sorted(const std::vector<double>& sorted, double q) {
  // Linear interpolation between order statistics (R type 7).
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

DistributionFeatures distribution(const Vector& y) {
  const auto n = y.size();
  if (n < 30) fail(ErrorCode::invalid_argument, "ela_distr needs at least 30 samples");
  const double nd = static_cast<double>(n);
  const double mean = y.mean();
  const Eigen::ArrayXd c = y.array() - mean;
  const double m2 = c.square().sum() / nd;
  if (!(m2 > 0.0) || m2 <= 1e-28 * mean * mean)
    fail(ErrorCode::degenerate_sample, "ela_distr: fitness values have zero variance");
  const double m3 = c.cube().sum() / nd;
  const double m4 = c.square().square().sum() / nd;

  DistributionFeatures out{};
  out.skewness = m3 / std::pow(m2, 1.5);
  out.kurtosis = m4 / (m2 * m2) - 3.0;

  std::vector<double> sorted(y.data(), y.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const double sd = std::sqrt(c.square().sum() / (nd - 1.0));
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  const double h = 0.9 * spread * std::pow(nd, -0.2);

  const double lo = sorted.front() - 3.0 * h;
  const double hi = sorted.back() + 3.0 * h;
  const double step = (hi - lo) / (kGridSize - 1);
  std::vector<double> density(kGridSize, 0.0);
  for (int k = 0; k < kGridSize; ++k) {
    const double g = lo + step * k;
    double s = 0.0;
    for (const double v : sorted) {
      const double u = (g - v) / h;
      s += std::exp(-0.5 * u * u);
    }
    density[static_cast<std::size_t>(k)] = s;
  }
  double total = 0.0;
  for (const double v : density) total += v;

  int peaks = 0;
  for (int k = 1; k + 1 < kGridSize; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (!(density[i] > density[i - 1] && density[i] > density[i + 1])) continue;
    std::size_t left = i;
    while (left > 0 && density[left - 1] <= density[left]) --left;
    std::size_t right = i;
    while (right + 1 < density.size() && density[right + 1] <= density[right]) ++right;
    double mass = 0.0;
    for (std::size_t j = left; j <= right; ++j) mass += density[j];
    if (mass / total > kMinPeakMass) ++peaks;
  }
  out.number_of_peaks = peaks;
  return out;
}

}  // namespace ela::features

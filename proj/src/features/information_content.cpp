#include "ela/features.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace ela::features {

namespace {

constexpr double kSettlingThreshold = 0.05;
constexpr double kInfoSensitivity = 0.5;

// Reported sensitivities are log10(epsilon); epsilon = 0 reports the smallest
// positive grid value so that the features stay finite.
double log_epsilon(double eps, const std::vector<double>& grid) { return std::log10(eps > 0.0 ? eps : grid[1]); }

}  // namespace

std::vector<double> ic_epsilon_grid() {
  std::vector<double> grid{0.0};
  for (int k = 0; k < 100; ++k) grid.push_back(std::pow(10.0, -5.0 + 20.0 * k / 99.0));
  return grid;
}

std::vector<int> ic_symbols(const std::vector<double>& rates, double epsilon) {
  std::vector<int> s(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) s[i] = rates[i] < -epsilon ? -1 : (rates[i] > epsilon ? 1 : 0);
  return s;
}

double ic_entropy(const std::vector<int>& symbols) {
  if (symbols.size() < 2) return 0.0;
  std::array<std::array<double, 3>, 3> counts{};
  for (std::size_t i = 0; i + 1 < symbols.size(); ++i)
    counts[static_cast<std::size_t>(symbols[i] + 1)][static_cast<std::size_t>(symbols[i + 1] + 1)] += 1.0;
  const double pairs = static_cast<double>(symbols.size() - 1);
  double h = 0.0;
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) {
      if (p == q || counts[p][q] == 0.0) continue;
      const double prob = counts[p][q] / pairs;
      h -= prob * std::log(prob) / std::log(6.0);
    }
  return h;
}

double ic_partial_information(const std::vector<int>& symbols) {
  if (symbols.empty()) return 0.0;
  int runs = 0;
  int last = 0;
  for (const int s : symbols) {
    if (s == 0 || s == last) continue;
    ++runs;
    last = s;
  }
  return static_cast<double>(runs) / static_cast<double>(symbols.size());
}

std::vector<Eigen::Index> nearest_neighbour_tour(const Matrix& points) {
  const auto n = points.rows();
  std::vector<Eigen::Index> tour;
  tour.reserve(static_cast<std::size_t>(n));
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  Eigen::Index current = 0;
  visited[0] = true;
  tour.push_back(0);
  for (Eigen::Index step = 1; step < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index next = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (visited[static_cast<std::size_t>(j)]) continue;
      const double d = (points.row(j) - points.row(current)).squaredNorm();
      if (d < best) {
        best = d;
        next = j;
      }
    }
    visited[static_cast<std::size_t>(next)] = true;
    tour.push_back(next);
    current = next;
  }
  return tour;
}

InformationContentFeatures information_content(const sampling::Sample& sample) {
  const auto n = sample.size();
  if (n < 100) fail(ErrorCode::invalid_argument, "information content needs at least 100 samples");

  const auto tour = nearest_neighbour_tour(sample.points);
  std::vector<double> rates;
  rates.reserve(static_cast<std::size_t>(n));
  std::size_t skipped = 0;
  for (std::size_t i = 0; i + 1 < tour.size(); ++i) {
    const double dist = (sample.points.row(tour[i + 1]) - sample.points.row(tour[i])).norm();
    if (dist == 0.0) {
      ++skipped;
      continue;
    }
    rates.push_back((sample.fitness[tour[i + 1]] - sample.fitness[tour[i]]) / dist);
  }
  if (skipped > 0) warn("information content: skipped " + std::to_string(skipped) + " zero-distance step(s)");

  const auto grid = ic_epsilon_grid();
  std::vector<double> entropy(grid.size());
  std::vector<double> partial(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto symbols = ic_symbols(rates, grid[k]);
    entropy[k] = ic_entropy(symbols);
    partial[k] = ic_partial_information(symbols);
  }

  InformationContentFeatures out{};
  std::size_t arg_max = 0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (entropy[k] > entropy[arg_max]) arg_max = k;
  out.h_max = entropy[arg_max];
  out.eps_max = log_epsilon(grid[arg_max], grid);

  std::size_t settled = grid.size() - 1;
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (entropy[k] < kSettlingThreshold) {
      settled = k;
      break;
    }
  out.eps_s = log_epsilon(grid[settled], grid);

  out.m0 = partial[0];
  std::size_t last_informative = 0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (partial[k] > kInfoSensitivity * out.m0) last_informative = k;
  out.eps_ratio = log_epsilon(grid[last_informative], grid);
  return out;
}

}  // namespace ela::features

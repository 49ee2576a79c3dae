#include "ela/sampling.hpp"

#include "sobol_directions.hpp"

#include <array>
#include <iomanip>
#include <random>

namespace ela::sampling {

namespace {

constexpr int kBits = 30;
constexpr std::uint64_t kMaxIndex = std::uint64_t{1} << kBits;

std::array<std::uint32_t, kBits> direction_numbers(int dim_index) {
  std::array<std::uint32_t, kBits> v{};
  if (dim_index == 0) {
    for (int k = 0; k < kBits; ++k) v[static_cast<std::size_t>(k)] = std::uint32_t{1} << (kBits - 1 - k);
    return v;
  }
  const auto& poly = detail::kSobolTable[static_cast<std::size_t>(dim_index - 1)];
  const int s = static_cast<int>(poly.degree);
  std::array<std::uint32_t, kBits> m{};
  for (int k = 0; k < s && k < kBits; ++k) m[static_cast<std::size_t>(k)] = poly.initial[static_cast<std::size_t>(k)];
  for (int k = s; k < kBits; ++k) {
    std::uint32_t value = m[static_cast<std::size_t>(k - s)] ^ (m[static_cast<std::size_t>(k - s)] << s);
    for (int j = 1; j < s; ++j) {
      if ((poly.coefficients >> (s - 1 - j)) & 1u) value ^= m[static_cast<std::size_t>(k - j)] << j;
    }
    m[static_cast<std::size_t>(k)] = value;
  }
  for (int k = 0; k < kBits; ++k) v[static_cast<std::size_t>(k)] = m[static_cast<std::size_t>(k)] << (kBits - 1 - k);
  return v;
}

void check_shape(int dimension, int count) {
  if (dimension < 1) fail(ErrorCode::invalid_argument, "dimension must be at least 1");
  if (count < 1) fail(ErrorCode::invalid_argument, "count must be at least 1");
}

}  // namespace

Sampler parse_sampler(const std::string& name) {
  if (name == "sobol") return Sampler::sobol;
  if (name == "uniform") return Sampler::uniform;
  fail(ErrorCode::invalid_argument, "unknown sampler '" + name + "' (expected sobol or uniform)");
}

std::string to_string(Sampler sampler) { return sampler == Sampler::sobol ? "sobol" : "uniform"; }

int max_sobol_dimension() { return static_cast<int>(detail::kSobolTable.size()) + 1; }

Matrix sobol_points(int dimension, int count, std::uint64_t seed) {
  check_shape(dimension, count);
  if (dimension > max_sobol_dimension())
    fail(ErrorCode::unsupported, "Sobol dimension " + std::to_string(dimension) + " exceeds the supported maximum of " +
                                     std::to_string(max_sobol_dimension()));
  if (seed >= kMaxIndex || static_cast<std::uint64_t>(count) > kMaxIndex - seed)
    fail(ErrorCode::invalid_argument, "Sobol skip + count exceeds 2^30 points");

  Matrix out(count, dimension);
  constexpr double scale = 1.0 / static_cast<double>(kMaxIndex);
  for (int j = 0; j < dimension; ++j) {
    const auto v = direction_numbers(j);
    // Jump straight to index `seed` through its Gray code, then walk.
    const std::uint64_t gray = seed ^ (seed >> 1);
    std::uint32_t x = 0;
    for (int k = 0; k < kBits; ++k)
      if ((gray >> k) & 1u) x ^= v[static_cast<std::size_t>(k)];
    std::uint64_t index = seed;
    for (int i = 0; i < count; ++i) {
      out(i, j) = static_cast<double>(x) * scale;
      // Rightmost zero bit of the current index selects the next direction.
      int c = 0;
      while ((index >> c) & 1u) ++c;
      if (c < kBits) x ^= v[static_cast<std::size_t>(c)];
      ++index;
    }
  }
  return out;
}

Matrix uniform_points(int dimension, int count, std::uint64_t seed) {
  check_shape(dimension, count);
  std::mt19937_64 rng(seed);
  Matrix out(count, dimension);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < dimension; ++j) out(i, j) = uniform01(rng);
  return out;
}

Sample build_design(const problems::ProblemInstance& instance, Sampler sampler, int count, std::uint64_t seed) {
  const int d = instance.dimension();
  Matrix unit = sampler == Sampler::sobol ? sobol_points(d, count, seed) : uniform_points(d, count, seed);
  const auto [lower, upper] = problems::domain(instance);
  Sample sample;
  sample.label = instance.label();
  sample.points.resize(count, d);
  for (int j = 0; j < d; ++j)
    sample.points.col(j) = (unit.col(j).array() * (upper[j] - lower[j]) + lower[j]).matrix();
  sample.fitness.resize(count);
  for (int i = 0; i < count; ++i) {
    const Vector x = sample.points.row(i).transpose();
    sample.fitness[i] = instance.evaluate(x);
    if (!std::isfinite(sample.fitness[i]))
      fail(ErrorCode::numerical, "non-finite fitness for " + ela::to_string(sample.label) + " at sample " + std::to_string(i));
  }
  return sample;
}

void write_sample_csv(const Sample& sample, std::ostream& out) {
  const auto d = sample.points.cols();
  for (Eigen::Index j = 0; j < d; ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) out << sample.points(i, j) << ',';
    out << sample.fitness[i] << '\n';
  }
}

}  // namespace ela::sampling

#pragma once

#include "ela/common.hpp"
#include "ela/problems.hpp"

#include <ostream>

namespace ela::sampling {

enum class Sampler { sobol, uniform };

Sampler parse_sampler(const std::string& name);
std::string to_string(Sampler sampler);

/// Largest dimension covered by the bundled direction-number table.
int max_sobol_dimension();

/// `count` x `dimension` matrix of Sobol' points in [0, 1)^dimension, in
/// Gray-code order. `seed` is a skip-ahead: the first `seed` points of the
/// sequence are not emitted.
Matrix sobol_points(int dimension, int count, std::uint64_t seed);

/// i.i.d. uniform points in [0, 1)^dimension from a seeded 64-bit Mersenne
/// Twister.
Matrix uniform_points(int dimension, int count, std::uint64_t seed);

/// (x, f(x)) pairs. Rows of `points` are search points.
struct Sample {
  Matrix points;
  Vector fitness;
  InstanceLabel label;

  Eigen::Index size() const { return fitness.size(); }
};

/// Draws `count` points with the given sampler, maps them affinely onto the
/// instance domain and evaluates them.
Sample build_design(const problems::ProblemInstance& instance, Sampler sampler, int count, std::uint64_t seed);

/// CSV with columns x1..xd, y.
void write_sample_csv(const Sample& sample, std::ostream& out);

}  // namespace ela::sampling

#pragma once

#include "ela/common.hpp"

#include <span>
#include <utility>

namespace ela::problems {

inline constexpr int kHappyCat = 25;
inline constexpr int kHGBat = 26;
inline constexpr double kDomainBound = 5.0;

/// One instance of a noiseless BBOB function (ids 1..24) or of HappyCat (25)
/// and HGBat (26).
///
/// All transformation data is generated from a 64-bit Mersenne Twister keyed
/// on (function_id, instance_id):
///   * x_shift uniform in [-4, 4]^d (function-specific adjustments for f4, f5,
///     f8, f9, f19, f20, f21, f22, f24 follow the BBOB definitions, so that
///     x_shift is always the location of the optimum);
///   * f_shift uniform in [-100, 100], rounded to two decimals;
///   * rotations R and Q from the QR factorization of a seeded Gaussian matrix.
/// Instances are immutable and safe to share between threads.
class ProblemInstance {
 public:
  int function_id() const { return function_id_; }
  int instance_id() const { return instance_id_; }
  int dimension() const { return dimension_; }
  InstanceLabel label() const { return {function_id_, instance_id_}; }

  /// Location of the optimum.
  const Vector& x_shift() const { return x_shift_; }
  /// Objective value at the optimum.
  double f_shift() const { return f_shift_; }
  std::uint64_t rotation_seed() const { return rotation_seed_; }

  const Matrix& rotation_r() const { return rotation_r_; }
  const Matrix& rotation_q() const { return rotation_q_; }

  double evaluate(std::span<const double> x) const;
  double evaluate(const Vector& x) const { return evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))); }

  friend ProblemInstance make_instance(int function_id, int instance_id, int dimension);

 private:
  ProblemInstance() = default;

  double evaluate_unchecked(const Vector& x) const;

  int function_id_ = 0;
  int instance_id_ = 0;
  int dimension_ = 0;
  Vector x_shift_;
  double f_shift_ = 0.0;
  std::uint64_t rotation_seed_ = 0;
  Matrix rotation_r_;
  Matrix rotation_q_;

  // Gallagher peaks (f21, f22): positions, weights and per-peak conditioning.
  std::vector<Vector> peaks_;
  std::vector<double> peak_weights_;
  std::vector<Vector> peak_scales_;
};

/// Largest supported dimension; each instance stores dense d x d rotations.
inline constexpr int kMaxDimension = 640;

/// Builds a fully materialized instance. Throws invalid_argument for ids
/// outside 1..26, instance_id < 1 or dimension < 2, and unsupported for
/// dimension > kMaxDimension.
ProblemInstance make_instance(int function_id, int instance_id, int dimension = 5);

/// Search box [-5, 5]^d shared by every function in the suite.
std::pair<Vector, Vector> domain(const ProblemInstance& instance);

std::string function_name(int function_id);

}  // namespace ela::problems

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ela {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
  invalid_argument,
  unsupported,
  degenerate_sample,
  rank_deficient,
  schema,
  io,
  numerical,
};

/// Base exception for everything the library throws. The code is what the
/// C API and the CLI exit status are derived from.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

/// Non-fatal diagnostics (dropped replications, zero-range features, tiny
/// singular values). The default handler writes to stderr.
using WarningHandler = std::function<void(const std::string&)>;
/// An empty handler restores the default.
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

/// Row label of a problem instance: (function id, instance id).
struct InstanceLabel {
  int function_id = 0;
  int instance_id = 0;

  auto operator<=>(const InstanceLabel&) const = default;
};

std::string to_string(const InstanceLabel& label);

/// A dense matrix whose rows are instances and whose columns are named
/// quantities (features or embedding coordinates).
struct LabeledMatrix {
  std::vector<InstanceLabel> rows;
  std::vector<std::string> columns;
  Matrix data;

  Eigen::Index row_count() const { return data.rows(); }
  Eigen::Index column_count() const { return data.cols(); }

  /// Throws schema error unless labels and data shapes agree.
  void validate() const;
  /// Column index by name, or -1.
  Eigen::Index column_index(const std::string& name) const;
  LabeledMatrix select_columns(const std::vector<std::string>& names) const;
  LabeledMatrix select_rows(const std::vector<Eigen::Index>& indices) const;
};

LabeledMatrix concat_rows(const LabeledMatrix& top, const LabeledMatrix& bottom);

/// SplitMix64 finalizer, used to derive independent seeds from tuples.
std::uint64_t mix_seed(std::uint64_t value);
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw. Written out
/// explicitly so that streams are identical across standard libraries.
template <class Engine>
double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Standard normal draw (Box-Muller, cosine branch only).
template <class Engine>
double standard_normal(Engine& engine) {
  double u1 = uniform01(engine);
  while (u1 <= 0.0) u1 = uniform01(engine);
  const double u2 = uniform01(engine);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

double median(std::vector<double> values);

}  // namespace ela

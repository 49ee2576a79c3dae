#include "ela/common.hpp"

#include <algorithm>
#include <iostream>
#include <mutex>

namespace ela {

namespace {

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

void print_warning(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

WarningHandler& warning_handler() {
  static WarningHandler handler = print_warning;
  return handler;
}

}  // namespace

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warning_mutex());
  warning_handler() = handler ? std::move(handler) : WarningHandler(print_warning);
}

void warn(const std::string& message) {
  std::lock_guard lock(warning_mutex());
  if (warning_handler()) warning_handler()(message);
}

std::string to_string(const InstanceLabel& label) {
  return "f" + std::to_string(label.function_id) + "_i" + std::to_string(label.instance_id);
}

void LabeledMatrix::validate() const {
  if (static_cast<Eigen::Index>(rows.size()) != data.rows())
    fail(ErrorCode::schema, "row label count " + std::to_string(rows.size()) +
                                " does not match data rows " + std::to_string(data.rows()));
  if (static_cast<Eigen::Index>(columns.size()) != data.cols())
    fail(ErrorCode::schema, "column name count " + std::to_string(columns.size()) +
                                " does not match data columns " + std::to_string(data.cols()));
}

Eigen::Index LabeledMatrix::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : static_cast<Eigen::Index>(it - columns.begin());
}

LabeledMatrix LabeledMatrix::select_columns(const std::vector<std::string>& names) const {
  LabeledMatrix out;
  out.rows = rows;
  out.columns = names;
  out.data.resize(data.rows(), static_cast<Eigen::Index>(names.size()));
  std::string missing;
  for (std::size_t j = 0; j < names.size(); ++j) {
    const Eigen::Index src = column_index(names[j]);
    if (src < 0)
      missing += (missing.empty() ? "'" : ", '") + names[j] + "'";
    else
      out.data.col(static_cast<Eigen::Index>(j)) = data.col(src);
  }
  if (!missing.empty()) fail(ErrorCode::schema, "missing column(s) " + missing);
  return out;
}

LabeledMatrix LabeledMatrix::select_rows(const std::vector<Eigen::Index>& indices) const {
  LabeledMatrix out;
  out.columns = columns;
  out.data.resize(static_cast<Eigen::Index>(indices.size()), data.cols());
  out.rows.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const Eigen::Index src = indices[i];
    if (src < 0 || src >= data.rows()) fail(ErrorCode::invalid_argument, "row index out of range");
    out.rows.push_back(rows[static_cast<std::size_t>(src)]);
    out.data.row(static_cast<Eigen::Index>(i)) = data.row(src);
  }
  return out;
}

LabeledMatrix concat_rows(const LabeledMatrix& top, const LabeledMatrix& bottom) {
  if (top.columns != bottom.columns)
    fail(ErrorCode::schema, "cannot stack matrices with different column schemas");
  LabeledMatrix out;
  out.columns = top.columns;
  out.rows = top.rows;
  out.rows.insert(out.rows.end(), bottom.rows.begin(), bottom.rows.end());
  out.data.resize(top.data.rows() + bottom.data.rows(), top.data.cols());
  out.data << top.data, bottom.data;
  return out;
}

std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (const auto part : parts) h = mix_seed(h ^ mix_seed(part));
  return h;
}

double median(std::vector<double> values) {
  if (values.empty()) fail(ErrorCode::invalid_argument, "median of an empty set");
  const auto n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace ela

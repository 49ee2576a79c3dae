#pragma once

#include "ela/common.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace test_support {

// Collects library warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture() {
    ela::set_warning_handler([this](const std::string& m) { messages.push_back(m); });
  }
  ~WarningCapture() { ela::set_warning_handler({}); }
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  bool contains(const std::string& needle) const {
    for (const auto& m : messages)
      if (m.find(needle) != std::string::npos) return true;
    return false;
  }

  std::vector<std::string> messages;
};

class TempDir {
 public:
  TempDir() {
    std::string templ = (std::filesystem::temp_directory_path() / "ela_test_XXXXXX").string();
    if (!mkdtemp(templ.data())) throw std::runtime_error("mkdtemp failed");
    path_ = templ;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline ela::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double lo = -1.0,
                                 double hi = 1.0) {
  std::mt19937_64 rng(seed);
  ela::Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = lo + (hi - lo) * ela::uniform01(rng);
  return m;
}

// Problem-major labels: functions 1..n_functions, instances 1..n_instances.
inline std::vector<ela::InstanceLabel> suite_labels(int n_functions, int n_instances) {
  std::vector<ela::InstanceLabel> labels;
  for (int f = 1; f <= n_functions; ++f)
    for (int i = 1; i <= n_instances; ++i) labels.push_back({f, i});
  return labels;
}

inline std::vector<std::string> numbered(const std::string& prefix, int count) {
  std::vector<std::string> names;
  for (int k = 1; k <= count; ++k) names.push_back(prefix + std::to_string(k));
  return names;
}

}  // namespace test_support

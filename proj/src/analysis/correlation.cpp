#include "ela/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace ela::analysis {

namespace {

bool is_constant(const Vector& v) { return v.size() == 0 || v.minCoeff() == v.maxCoeff(); }

CorrelationMatrix all_pairs(const std::vector<Vector>& vectors, std::vector<std::string> labels) {
  const auto n = static_cast<Eigen::Index>(vectors.size());
  CorrelationMatrix out;
  out.labels = std::move(labels);
  out.data = Matrix::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  out.defined.setConstant(n, n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto r = i == j ? (is_constant(vectors[static_cast<std::size_t>(i)]) ? std::nullopt : std::optional(1.0))
                            : pearson(vectors[static_cast<std::size_t>(i)], vectors[static_cast<std::size_t>(j)]);
      if (!r) continue;
      out.data(i, j) = out.data(j, i) = *r;
      out.defined(i, j) = out.defined(j, i) = true;
    }
  }
  return out;
}

}  // namespace

std::optional<double> pearson(const Vector& v, const Vector& w) {
  if (v.size() != w.size()) fail(ErrorCode::invalid_argument, "pearson: vectors differ in length");
  if (v.size() < 2) fail(ErrorCode::invalid_argument, "pearson: need at least two observations");
  if (is_constant(v) || is_constant(w)) return std::nullopt;
  const Eigen::ArrayXd a = v.array() - v.mean();
  const Eigen::ArrayXd b = w.array() - w.mean();
  const double saa = a.square().sum();
  const double sbb = b.square().sum();
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  const double r = (a * b).sum() / std::sqrt(saa * sbb);
  return std::clamp(r, -1.0, 1.0);
}

std::optional<double> CorrelationMatrix::at(Eigen::Index i, Eigen::Index j) const {
  if (!defined(i, j)) return std::nullopt;
  return data(i, j);
}

CorrelationMatrix instance_correlation(const Matrix& rows, std::vector<std::string> labels) {
  if (rows.rows() < 2) fail(ErrorCode::invalid_argument, "instance correlation needs at least two rows");
  if (static_cast<Eigen::Index>(labels.size()) != rows.rows())
    fail(ErrorCode::schema, "instance correlation: label count does not match rows");
  std::vector<Vector> vectors;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) vectors.emplace_back(rows.row(i).transpose());
  return all_pairs(vectors, std::move(labels));
}

CorrelationMatrix instance_correlation(const LabeledMatrix& x) {
  x.validate();
  std::vector<std::string> labels;
  for (const auto& l : x.rows) labels.push_back(ela::to_string(l));
  return instance_correlation(x.data, std::move(labels));
}

CorrelationMatrix feature_correlation(const LabeledMatrix& x) {
  x.validate();
  if (x.column_count() < 2) fail(ErrorCode::invalid_argument, "feature correlation needs at least two columns");
  std::vector<Vector> vectors;
  for (Eigen::Index j = 0; j < x.column_count(); ++j) vectors.emplace_back(x.data.col(j));
  return all_pairs(vectors, x.columns);
}

std::vector<ProblemGroupSummary> correlation_report(const CorrelationMatrix& corr,
                                                    const std::vector<InstanceLabel>& labels, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    fail(ErrorCode::invalid_argument, "correlation threshold must be in (0, 1]");
  if (static_cast<Eigen::Index>(labels.size()) != corr.size())
    fail(ErrorCode::schema, "correlation report: label count does not match matrix size");

  std::vector<int> order;
  std::map<int, std::vector<Eigen::Index>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int f = labels[i].function_id;
    if (!members.contains(f)) order.push_back(f);
    members[f].push_back(static_cast<Eigen::Index>(i));
  }

  std::vector<ProblemGroupSummary> out;
  for (const int f : order) {
    const auto& rows = members[f];
    ProblemGroupSummary g;
    g.function_id = f;
    for (const auto r : rows) g.instance_ids.push_back(labels[static_cast<std::size_t>(r)].instance_id);

    double sum = 0.0;
    int count = 0;
    std::vector<std::size_t> parent(rows.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a + 1; b < rows.size(); ++b) {
        const auto r = corr.at(rows[a], rows[b]);
        if (!r) continue;
        sum += *r;
        ++count;
        if (*r >= threshold) parent[find(a)] = find(b);
      }
    }
    if (count > 0) g.mean_within_correlation = sum / count;

    std::map<std::size_t, std::vector<int>> components;
    std::vector<std::size_t> roots;
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const auto root = find(a);
      if (!components.contains(root)) roots.push_back(root);
      components[root].push_back(g.instance_ids[a]);
    }
    for (const auto root : roots) g.components.push_back(components[root]);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace ela::analysis

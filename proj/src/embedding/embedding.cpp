#include "ela/embedding.hpp"

#include "double_double.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ela::embedding {

Normalization parse_normalization(const std::string& name) {
  if (name == "none") return Normalization::none;
  if (name == "minmax") return Normalization::minmax;
  fail(ErrorCode::invalid_argument, "unknown normalization '" + name + "' (expected none or minmax)");
}

std::string to_string(Normalization normalization) {
  return normalization == Normalization::minmax ? "minmax" : "none";
}

MinMaxScaler MinMaxScaler::fit(const Matrix& rows) {
  if (rows.rows() < 2) fail(ErrorCode::invalid_argument, "min-max scaling needs at least two training rows");
  MinMaxScaler s;
  s.min = rows.colwise().minCoeff().transpose();
  s.max = rows.colwise().maxCoeff().transpose();
  for (Eigen::Index j = 0; j < s.min.size(); ++j)
    if (s.max[j] == s.min[j]) warn("min-max: feature " + std::to_string(j) + " has zero range; mapped to 0");
  return s;
}

Vector MinMaxScaler::apply(const Vector& row) const {
  if (row.size() != min.size()) fail(ErrorCode::schema, "min-max: row length does not match the fitted feature count");
  Vector out(row.size());
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    const double range = max[j] - min[j];
    out[j] = range == 0.0 ? 0.0 : (row[j] - min[j]) / range;
  }
  return out;
}

Matrix MinMaxScaler::apply(const Matrix& rows) const {
  Matrix out(rows.rows(), rows.cols());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) out.row(i) = apply(Vector(rows.row(i).transpose())).transpose();
  return out;
}

EmbeddingModel::EmbeddingModel(Svd svd, std::optional<MinMaxScaler> scaler, std::vector<InstanceLabel> row_labels,
                               std::vector<std::string> column_labels)
    : svd_(std::move(svd)),
      scaler_(std::move(scaler)),
      row_labels_(std::move(row_labels)),
      column_labels_(std::move(column_labels)) {}

Vector EmbeddingModel::normalize(const Vector& p) const { return scaler_ ? scaler_->apply(p) : p; }

Matrix EmbeddingModel::normalize(const Matrix& rows) const { return scaler_ ? scaler_->apply(rows) : rows; }

EmbeddingModel fit(const LabeledMatrix& x, Normalization normalization) {
  x.validate();
  if (x.row_count() < 2) fail(ErrorCode::invalid_argument, "embedding fit needs at least two rows");
  for (Eigen::Index i = 0; i < x.row_count(); ++i)
    for (Eigen::Index j = 0; j < x.column_count(); ++j)
      if (!std::isfinite(x.data(i, j)))
        fail(ErrorCode::invalid_argument, "non-finite entry at row " + ela::to_string(x.rows[static_cast<std::size_t>(i)]) +
                                              ", column '" + x.columns[static_cast<std::size_t>(j)] + "'");
  std::optional<MinMaxScaler> scaler;
  if (normalization == Normalization::minmax) scaler = MinMaxScaler::fit(x.data);
  const Matrix scaled = scaler ? scaler->apply(x.data) : x.data;
  return EmbeddingModel(jacobi_svd(scaled), std::move(scaler), x.rows, x.columns);
}

namespace {

void check_rank(const EmbeddingModel& model, int rank) {
  if (rank < 1 || rank > model.rank_full())
    fail(ErrorCode::invalid_argument,
         "rank " + std::to_string(rank) + " outside 1.." + std::to_string(model.rank_full()));
}

void check_inversion(const EmbeddingModel& model, int rank) {
  check_rank(model, rank);
  const Vector& sigma = model.singular_values();
  const double sigma_r = sigma[rank - 1];
  if (sigma_r == 0.0)
    fail(ErrorCode::rank_deficient, "singular value " + std::to_string(rank) + " is zero; cannot invert");
  if (sigma_r < 1e-12 * sigma[0])
    warn("embedding: singular value " + std::to_string(rank) + " is below 1e-12 * sigma_1; fingerprints are ill-conditioned");
}

Vector project_unchecked(const EmbeddingModel& model, const Vector& p, int rank) {
  if (p.size() != static_cast<Eigen::Index>(model.column_labels().size()))
    fail(ErrorCode::schema, "feature vector has " + std::to_string(p.size()) + " entries, model expects " +
                                std::to_string(model.column_labels().size()));
  const Vector normalized = model.normalize(p);
  return (model.v().leftCols(rank).transpose() * normalized).cwiseQuotient(model.singular_values().head(rank));
}

}  // namespace

Fingerprint embed_row(const EmbeddingModel& model, const Vector& p, int rank, std::string label) {
  check_inversion(model, rank);
  return {project_unchecked(model, p, rank), rank, std::move(label)};
}

Fingerprint project_external(const EmbeddingModel& model, const Vector& p, int rank, std::string label) {
  return embed_row(model, p, rank, std::move(label));
}

std::vector<std::string> fingerprint_columns(int rank) {
  std::vector<std::string> names;
  for (int k = 1; k <= rank; ++k) names.push_back("sv" + std::to_string(k));
  return names;
}

LabeledMatrix project_rows(const EmbeddingModel& model, const LabeledMatrix& x, int rank) {
  x.validate();
  const LabeledMatrix aligned = x.columns == model.column_labels() ? x : x.select_columns(model.column_labels());
  LabeledMatrix out;
  out.rows = aligned.rows;
  out.columns = fingerprint_columns(rank);
  check_inversion(model, rank);
  out.data.resize(aligned.row_count(), rank);
  for (Eigen::Index i = 0; i < aligned.row_count(); ++i)
    out.data.row(i) = project_unchecked(model, aligned.data.row(i).transpose(), rank).transpose();
  return out;
}

Matrix low_rank_approximation(const EmbeddingModel& model, int rank) {
  check_rank(model, rank);
  return model.u().leftCols(rank) * model.singular_values().head(rank).asDiagonal() *
         model.v().leftCols(rank).transpose();
}

namespace {

// Euclidean norm of double-double values, accumulated in double-double after
// an exact power-of-two rescale, rounded once at the end.
double scaled_norm(const std::vector<detail::dd>& values) {
  double largest = 0.0;
  for (const auto& v : values) largest = std::max(largest, std::abs(v.hi));
  if (largest == 0.0) return 0.0;
  const int e = std::ilogb(largest);
  detail::dd ssq;
  for (const auto& v : values) {
    const detail::dd t(std::ldexp(v.hi, -e), std::ldexp(v.lo, -e));
    ssq += t * t;
  }
  const detail::dd root = detail::sqrt(ssq);
  return std::ldexp(root.hi + root.lo, e);
}

}  // namespace

double low_rank_error(const EmbeddingModel& model, const Matrix& x, int rank) {
  using detail::dd;
  check_rank(model, rank);
  const Matrix normalized = model.normalize(x);
  const Svd& svd = model.svd();
  if (normalized.rows() != svd.u.rows() || normalized.cols() != svd.v.rows())
    fail(ErrorCode::schema, "low-rank error: matrix shape does not match the fitted model");
  const bool extended = svd.u_lo.size() == svd.u.size() && svd.v_lo.size() == svd.v.size() &&
                        svd.sigma_lo.size() == svd.sigma.size();
  const auto factor = [extended](const auto& hi, const auto& lo, Eigen::Index i, Eigen::Index k) {
    return extended ? dd(hi(i, k), lo(i, k)) : dd(hi(i, k));
  };
  std::vector<dd> us(static_cast<std::size_t>(rank));
  std::vector<dd> residuals;
  residuals.reserve(static_cast<std::size_t>(normalized.size()));
  for (Eigen::Index i = 0; i < normalized.rows(); ++i) {
    for (int k = 0; k < rank; ++k) {
      const dd s = extended ? dd(svd.sigma[k], svd.sigma_lo[k]) : dd(svd.sigma[k]);
      us[static_cast<std::size_t>(k)] = factor(svd.u, svd.u_lo, i, k) * s;
    }
    for (Eigen::Index j = 0; j < normalized.cols(); ++j) {
      dd acc(normalized(i, j));
      for (int k = 0; k < rank; ++k) acc = acc - us[static_cast<std::size_t>(k)] * factor(svd.v, svd.v_lo, j, k);
      residuals.push_back(acc);
    }
  }
  return scaled_norm(residuals);
}

double tail_singular_norm(const EmbeddingModel& model, int rank) {
  if (rank < 0 || rank > model.rank_full())
    fail(ErrorCode::invalid_argument,
         "rank " + std::to_string(rank) + " outside 0.." + std::to_string(model.rank_full()));
  const Svd& svd = model.svd();
  const bool extended = svd.sigma_lo.size() == svd.sigma.size();
  std::vector<detail::dd> tail;
  for (int k = rank; k < model.rank_full(); ++k)
    tail.emplace_back(svd.sigma[k], extended ? svd.sigma_lo[k] : 0.0);
  return scaled_norm(tail);
}

int cattell_scree(std::span<const double> singular_values) {
  const auto p = singular_values.size();
  if (p < 3) fail(ErrorCode::invalid_argument, "scree test needs at least three values");
  std::vector<double> eig(p);
  for (std::size_t i = 0; i < p; ++i) eig[i] = singular_values[i] * singular_values[i];
  for (std::size_t i = 1; i < p; ++i)
    if (eig[i] > eig[i - 1]) fail(ErrorCode::invalid_argument, "scree test expects nonincreasing values");
  if (eig.front() - eig.back() <= 1e-12 * eig.front()) {
    warn("scree test: all values are equal; returning 1");
    return 1;
  }
  double mean = 0.0;
  for (const double e : eig) mean += e;
  mean /= static_cast<double>(p);

  // Component i (1-based) is kept while its eigenvalue exceeds both the mean
  // and the value predicted by the line through eigenvalues i+1 and p.
  int keep = 1;
  for (std::size_t i = 2; i + 1 < p; ++i) {
    const double next = eig[i];
    const double predicted = next - (eig[p - 1] - next) / static_cast<double>(p - 1 - i);
    const double observed = eig[i - 1];
    if (observed >= predicted && observed >= mean)
      keep = static_cast<int>(i);
    else
      break;
  }
  return keep;
}

}  // namespace ela::embedding

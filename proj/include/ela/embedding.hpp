#pragma once

#include "ela/common.hpp"

#include <optional>
#include <span>

namespace ela::embedding {

/// Thin SVD A = U diag(sigma) V^T with sigma sorted nonincreasing.
/// U is rows x min(rows, cols), V is cols x min(rows, cols).
/// The *_lo members hold low-order corrections (u + u_lo is the factor to
/// about 32 digits); they may be empty, meaning zero.
struct Svd {
  Matrix u;
  Vector sigma;
  Matrix v;
  Matrix u_lo;
  Vector sigma_lo;
  Matrix v_lo;
};

/// One-sided (Hestenes) Jacobi SVD, iterated in double-double arithmetic so
/// that the factors reproduce A far below double rounding. Columns of U belonging to exactly zero
/// singular values are completed to an orthonormal set. Singular vectors are
/// sign-normalized so that the largest-magnitude entry of every V column is
/// positive, which makes the result deterministic.
Svd jacobi_svd(const Matrix& a);

enum class Normalization { none, minmax };

Normalization parse_normalization(const std::string& name);
std::string to_string(Normalization normalization);

/// Per-feature min-max scaling fitted on a set of rows. Features with zero
/// range map to 0; values outside the fitted range are not clipped.
struct MinMaxScaler {
  Vector min;
  Vector max;

  static MinMaxScaler fit(const Matrix& rows);
  Matrix apply(const Matrix& rows) const;
  Vector apply(const Vector& row) const;
};

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(Svd svd, std::optional<MinMaxScaler> scaler, std::vector<InstanceLabel> row_labels,
                 std::vector<std::string> column_labels);

  const Matrix& u() const { return svd_.u; }
  const Vector& singular_values() const { return svd_.sigma; }
  const Matrix& v() const { return svd_.v; }
  const Svd& svd() const { return svd_; }
  const std::optional<MinMaxScaler>& scaler() const { return scaler_; }
  Normalization normalization() const { return scaler_ ? Normalization::minmax : Normalization::none; }
  const std::vector<InstanceLabel>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& column_labels() const { return column_labels_; }
  int rank_full() const { return static_cast<int>(svd_.sigma.size()); }

  /// Applies the stored normalization (identity for none).
  Vector normalize(const Vector& p) const;
  Matrix normalize(const Matrix& rows) const;

 private:
  Svd svd_;
  std::optional<MinMaxScaler> scaler_;
  std::vector<InstanceLabel> row_labels_;
  std::vector<std::string> column_labels_;
};

/// Fits the embedding on every row of `x`. Rejects fewer than two rows and
/// non-finite entries (naming the offending cell).
EmbeddingModel fit(const LabeledMatrix& x, Normalization normalization);

struct Fingerprint {
  Vector values;
  int rank = 0;
  std::string label;
};

/// Sigma_r^-1 V_r^T p after normalization. `p` must follow the model's column
/// schema. Throws rank_deficient when sigma_r is exactly zero.
Fingerprint embed_row(const EmbeddingModel& model, const Vector& p, int rank, std::string label = {});

/// Same formula as embed_row, for rows that took no part in fitting.
Fingerprint project_external(const EmbeddingModel& model, const Vector& p, int rank, std::string label = {});

/// Projects every row of `x` (columns are matched to the model schema by
/// name). Output columns are named sv1..svR.
LabeledMatrix project_rows(const EmbeddingModel& model, const LabeledMatrix& x, int rank);

std::vector<std::string> fingerprint_columns(int rank);

/// Rank-r reconstruction of the normalized training matrix.
Matrix low_rank_approximation(const EmbeddingModel& model, int rank);

/// Frobenius norm of normalize(x) - U_r Sigma_r V_r^T, evaluated in
/// double-double with the extended factors when the model has them.
double low_rank_error(const EmbeddingModel& model, const Matrix& x, int rank);

/// sqrt(sum_{k > rank} sigma_k^2), the exact rank-`rank` error on the training
/// matrix. rank may be 0..rank_full.
double tail_singular_norm(const EmbeddingModel& model, int rank);

/// Optimal-coordinates non-graphical scree test on the squared singular
/// values. Returns the number of components to keep.
int cattell_scree(std::span<const double> singular_values);

}  // namespace ela::embedding

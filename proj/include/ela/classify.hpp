#pragma once

#include "ela/common.hpp"
#include "ela/embedding.hpp"

#include <optional>

namespace ela::classify {

/// Rows sharing one instance id across all problems.
struct Fold {
  int instance_id = 0;
  std::vector<Eigen::Index> rows;
};

/// Fold j holds every row whose instance id is the j-th smallest id. Every
/// problem must carry the same set of instance ids.
std::vector<Fold> stratified_folds(const std::vector<InstanceLabel>& labels);

/// Complement of a fold.
std::vector<Eigen::Index> training_rows(const std::vector<Fold>& folds, std::size_t test_fold);

struct ScaledSplit {
  Matrix train;
  Matrix test;
  embedding::MinMaxScaler scaler;
};

/// Fits min-max parameters on `train` only and applies them to both sets.
ScaledSplit minmax_fit_apply(const Matrix& train, const Matrix& test);

/// Majority vote of the k nearest training rows (Euclidean). Vote ties go to
/// the class with the smallest summed distance, then to the lowest label.
std::vector<int> knn_predict(const Matrix& train_x, const std::vector<int>& train_y, const Matrix& test_x, int k = 4);

struct SgdOptions {
  double learning_rate = 0.01;
  int epochs = 1000;
  std::uint64_t seed = 0;
};

/// One-vs-rest linear classifier; each row of `weights` scores one class.
struct LinearModel {
  std::vector<int> classes;
  Matrix weights;
  Vector bias;
  int epochs_run = 0;
};

/// Hinge-loss SGD with per-epoch shuffling. Stops early once the training
/// loss changes by less than 1e-6 (relative) over 10 epochs.
LinearModel sgd_linear_train(const Matrix& x, const std::vector<int>& y, const SgdOptions& options);
std::vector<int> predict(const LinearModel& model, const Matrix& x);

struct CentroidModel {
  std::vector<int> classes;
  Matrix centroids;  // one row per class
};

CentroidModel nearest_centroid(const Matrix& x, const std::vector<int>& y);
std::vector<int> predict(const CentroidModel& model, const Matrix& x);

enum class ClassifierKind { knn, sgd, nearest_centroid };

ClassifierKind parse_classifier(const std::string& name);
std::string to_string(ClassifierKind kind);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::knn;
  int k = 4;
  SgdOptions sgd;
};

enum class Space { original, embedded };

Space parse_space(const std::string& name);
std::string to_string(Space space);

struct CvConfig {
  Space space = Space::embedded;
  embedding::Normalization normalization = embedding::Normalization::none;
  /// Embedding rank; 0 means full rank of the training fold.
  int rank = 0;
  ClassifierSpec classifier;
};

struct CvReport {
  CvConfig config;
  std::vector<int> fold_instance_ids;
  std::vector<double> per_fold_accuracy;
  double mean_accuracy = 0.0;
};

/// Everything fitted on the training rows of one fold.
struct FoldTransform {
  std::optional<embedding::MinMaxScaler> scaler;   // original space + minmax
  std::optional<embedding::EmbeddingModel> model;  // embedded space
  int rank = 0;
};

FoldTransform fit_fold_transform(const LabeledMatrix& train, const CvConfig& config);
Matrix apply_fold_transform(const FoldTransform& transform, const LabeledMatrix& rows);

struct FoldData {
  LabeledMatrix train;
  LabeledMatrix test;
  FoldTransform transform;
};

/// Transformed train/test matrices of fold `test_fold`.
FoldData prepare_fold(const LabeledMatrix& x, const std::vector<Fold>& folds, std::size_t test_fold,
                      const CvConfig& config);

/// Class label of a row (the function id).
std::vector<int> class_labels(const std::vector<InstanceLabel>& rows);

std::vector<int> train_and_predict(const ClassifierSpec& spec, const Matrix& train_x, const std::vector<int>& train_y,
                                   const Matrix& test_x);

CvReport evaluate_cv(const LabeledMatrix& x, const CvConfig& config);

}  // namespace ela::classify

#include "ela/classify.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ela::classify {

ClassifierKind parse_classifier(const std::string& name) {
  if (name == "knn") return ClassifierKind::knn;
  if (name == "sgd") return ClassifierKind::sgd;
  if (name == "nearest_centroid") return ClassifierKind::nearest_centroid;
  fail(ErrorCode::invalid_argument, "unknown classifier '" + name + "' (expected knn, sgd or nearest_centroid)");
}

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::knn: return "knn";
    case ClassifierKind::sgd: return "sgd";
    case ClassifierKind::nearest_centroid: return "nearest_centroid";
  }
  return "unknown";
}

Space parse_space(const std::string& name) {
  if (name == "original") return Space::original;
  if (name == "embedded") return Space::embedded;
  fail(ErrorCode::invalid_argument, "unknown space '" + name + "' (expected original or embedded)");
}

std::string to_string(Space space) { return space == Space::original ? "original" : "embedded"; }

std::vector<Fold> stratified_folds(const std::vector<InstanceLabel>& labels) {
  std::map<int, std::set<int>> instances_by_problem;
  std::set<int> all_instances;
  for (const auto& l : labels) {
    if (!instances_by_problem[l.function_id].insert(l.instance_id).second)
      fail(ErrorCode::invalid_argument, "duplicate row " + ela::to_string(l));
    all_instances.insert(l.instance_id);
  }
  for (const auto& [f, ids] : instances_by_problem)
    for (const int i : all_instances)
      if (!ids.contains(i))
        fail(ErrorCode::invalid_argument,
             "problem f" + std::to_string(f) + " is missing instance " + std::to_string(i) + " required by the folds");

  std::vector<Fold> folds;
  for (const int i : all_instances) folds.push_back({i, {}});
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const auto pos = std::distance(all_instances.begin(), all_instances.find(labels[r].instance_id));
    folds[static_cast<std::size_t>(pos)].rows.push_back(static_cast<Eigen::Index>(r));
  }
  return folds;
}

std::vector<Eigen::Index> training_rows(const std::vector<Fold>& folds, std::size_t test_fold) {
  std::vector<Eigen::Index> rows;
  for (std::size_t f = 0; f < folds.size(); ++f)
    if (f != test_fold) rows.insert(rows.end(), folds[f].rows.begin(), folds[f].rows.end());
  std::sort(rows.begin(), rows.end());
  return rows;
}

ScaledSplit minmax_fit_apply(const Matrix& train, const Matrix& test) {
  ScaledSplit out{Matrix(), Matrix(), embedding::MinMaxScaler::fit(train)};
  out.train = out.scaler.apply(train);
  out.test = out.scaler.apply(test);
  return out;
}

std::vector<int> class_labels(const std::vector<InstanceLabel>& rows) {
  std::vector<int> y;
  for (const auto& l : rows) y.push_back(l.function_id);
  return y;
}

FoldTransform fit_fold_transform(const LabeledMatrix& train, const CvConfig& config) {
  FoldTransform t;
  if (config.space == Space::original) {
    if (config.normalization == embedding::Normalization::minmax) t.scaler = embedding::MinMaxScaler::fit(train.data);
    return t;
  }
  const int full = static_cast<int>(std::min(train.row_count(), train.column_count()));
  t.rank = config.rank == 0 ? full : config.rank;
  if (t.rank < 1 || t.rank > full)
    fail(ErrorCode::invalid_argument, "rank " + std::to_string(t.rank) + " exceeds the training matrix rank " +
                                          std::to_string(full));
  t.model = embedding::fit(train, config.normalization);
  return t;
}

Matrix apply_fold_transform(const FoldTransform& transform, const LabeledMatrix& rows) {
  if (transform.model) return embedding::project_rows(*transform.model, rows, transform.rank).data;
  if (transform.scaler) return transform.scaler->apply(rows.data);
  return rows.data;
}

FoldData prepare_fold(const LabeledMatrix& x, const std::vector<Fold>& folds, std::size_t test_fold,
                      const CvConfig& config) {
  const LabeledMatrix train = x.select_rows(training_rows(folds, test_fold));
  const LabeledMatrix test = x.select_rows(folds.at(test_fold).rows);
  FoldData out;
  out.transform = fit_fold_transform(train, config);
  out.train = train;
  out.test = test;
  out.train.data = apply_fold_transform(out.transform, train);
  out.test.data = apply_fold_transform(out.transform, test);
  if (out.transform.model) {
    out.train.columns = out.test.columns = embedding::fingerprint_columns(out.transform.rank);
  }
  return out;
}

std::vector<int> train_and_predict(const ClassifierSpec& spec, const Matrix& train_x, const std::vector<int>& train_y,
                                   const Matrix& test_x) {
  switch (spec.kind) {
    case ClassifierKind::knn: return knn_predict(train_x, train_y, test_x, spec.k);
    case ClassifierKind::sgd: return predict(sgd_linear_train(train_x, train_y, spec.sgd), test_x);
    case ClassifierKind::nearest_centroid: return predict(nearest_centroid(train_x, train_y), test_x);
  }
  fail(ErrorCode::invalid_argument, "unknown classifier");
}

CvReport evaluate_cv(const LabeledMatrix& x, const CvConfig& config) {
  x.validate();
  const auto folds = stratified_folds(x.rows);
  if (folds.size() < 2) fail(ErrorCode::invalid_argument, "cross-validation needs at least two folds");
  CvReport report;
  report.config = config;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const FoldData fold = prepare_fold(x, folds, f, config);
    const auto predicted =
        train_and_predict(config.classifier, fold.train.data, class_labels(fold.train.rows), fold.test.data);
    const auto truth = class_labels(fold.test.rows);
    int correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i] ? 1 : 0;
    report.fold_instance_ids.push_back(folds[f].instance_id);
    report.per_fold_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(truth.size()));
  }
  double sum = 0.0;
  for (const double a : report.per_fold_accuracy) sum += a;
  report.mean_accuracy = sum / static_cast<double>(report.per_fold_accuracy.size());
  return report;
}

}  // namespace ela::classify

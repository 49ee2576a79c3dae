#include "ela/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace ela::classify {

namespace {

std::vector<int> sorted_classes(const std::vector<int>& y) {
  std::vector<int> classes = y;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

void check_training_set(const Matrix& x, const std::vector<int>& y) {
  if (x.rows() == 0) fail(ErrorCode::invalid_argument, "empty training set");
  if (static_cast<Eigen::Index>(y.size()) != x.rows())
    fail(ErrorCode::invalid_argument, "training labels do not match training rows");
}

}  // namespace

std::vector<int> knn_predict(const Matrix& train_x, const std::vector<int>& train_y, const Matrix& test_x, int k) {
  check_training_set(train_x, train_y);
  if (k < 1 || k > train_x.rows()) fail(ErrorCode::invalid_argument, "k must be in 1..number of training rows");
  if (test_x.cols() != train_x.cols()) fail(ErrorCode::invalid_argument, "test and training columns differ");

  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(test_x.rows()));
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(train_x.rows()));
  for (Eigen::Index q = 0; q < test_x.rows(); ++q) {
    for (Eigen::Index i = 0; i < train_x.rows(); ++i)
      dist[static_cast<std::size_t>(i)] = {(train_x.row(i) - test_x.row(q)).norm(), i};
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());

    std::map<int, std::pair<int, double>> votes;  // label -> (count, summed distance)
    for (int n = 0; n < k; ++n) {
      auto& v = votes[train_y[static_cast<std::size_t>(dist[static_cast<std::size_t>(n)].second)]];
      v.first += 1;
      v.second += dist[static_cast<std::size_t>(n)].first;
    }
    int best_label = 0;
    std::pair<int, double> best{-1, 0.0};
    for (const auto& [label, v] : votes) {
      if (v.first > best.first || (v.first == best.first && v.second < best.second)) {
        best = v;
        best_label = label;
      }
    }
    out.push_back(best_label);
  }
  return out;
}

LinearModel sgd_linear_train(const Matrix& x, const std::vector<int>& y, const SgdOptions& options) {
  check_training_set(x, y);
  if (!(options.learning_rate > 0.0) || !std::isfinite(options.learning_rate))
    fail(ErrorCode::invalid_argument, "SGD learning rate must be positive");
  if (options.epochs < 1) fail(ErrorCode::invalid_argument, "SGD needs at least one epoch");

  LinearModel model;
  model.classes = sorted_classes(y);
  if (model.classes.size() < 2) fail(ErrorCode::invalid_argument, "SGD needs at least two classes");
  const auto n_classes = static_cast<Eigen::Index>(model.classes.size());
  const auto n = x.rows();
  model.weights = Matrix::Zero(n_classes, x.cols());
  model.bias = Vector::Zero(n_classes);

  std::vector<Eigen::Index> target(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    target[static_cast<std::size_t>(i)] =
        std::lower_bound(model.classes.begin(), model.classes.end(), y[static_cast<std::size_t>(i)]) -
        model.classes.begin();

  std::mt19937_64 rng(options.seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<double> losses;
  const double lr = options.learning_rate;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i))]);
    for (const auto i : order) {
      for (Eigen::Index c = 0; c < n_classes; ++c) {
        const double t = target[static_cast<std::size_t>(i)] == c ? 1.0 : -1.0;
        const double margin = t * (model.weights.row(c).dot(x.row(i)) + model.bias[c]);
        if (margin < 1.0) {
          model.weights.row(c) += lr * t * x.row(i);
          model.bias[c] += lr * t;
        }
      }
    }
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index c = 0; c < n_classes; ++c) {
        const double t = target[static_cast<std::size_t>(i)] == c ? 1.0 : -1.0;
        loss += std::max(0.0, 1.0 - t * (model.weights.row(c).dot(x.row(i)) + model.bias[c]));
      }
    loss /= static_cast<double>(n * n_classes);
    model.epochs_run = epoch + 1;
    if (!std::isfinite(loss) || !model.weights.allFinite())
      fail(ErrorCode::numerical, "SGD diverged (non-finite weights); try a smaller learning rate");
    losses.push_back(loss);
    if (loss == 0.0) break;
    if (losses.size() > 10) {
      const double before = losses[losses.size() - 11];
      if (std::abs(loss - before) <= 1e-6 * std::max(std::abs(before), std::numeric_limits<double>::min())) break;
    }
  }
  return model;
}

std::vector<int> predict(const LinearModel& model, const Matrix& x) {
  if (x.cols() != model.weights.cols()) fail(ErrorCode::invalid_argument, "feature count does not match the model");
  std::vector<int> out;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Vector scores = model.weights * x.row(i).transpose() + model.bias;
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.size(); ++c)
      if (scores[c] > scores[best]) best = c;
    out.push_back(model.classes[static_cast<std::size_t>(best)]);
  }
  return out;
}

CentroidModel nearest_centroid(const Matrix& x, const std::vector<int>& y) {
  check_training_set(x, y);
  CentroidModel model;
  model.classes = sorted_classes(y);
  model.centroids = Matrix::Zero(static_cast<Eigen::Index>(model.classes.size()), x.cols());
  std::vector<int> counts(model.classes.size(), 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto c = std::lower_bound(model.classes.begin(), model.classes.end(), y[static_cast<std::size_t>(i)]) -
                   model.classes.begin();
    model.centroids.row(c) += x.row(i);
    ++counts[static_cast<std::size_t>(c)];
  }
  for (std::size_t c = 0; c < counts.size(); ++c)
    model.centroids.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
  return model;
}

std::vector<int> predict(const CentroidModel& model, const Matrix& x) {
  if (x.cols() != model.centroids.cols()) fail(ErrorCode::invalid_argument, "feature count does not match the model");
  std::vector<int> out;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index best = 0;
    double best_d = (model.centroids.row(0) - x.row(i)).squaredNorm();
    for (Eigen::Index c = 1; c < model.centroids.rows(); ++c) {
      const double d = (model.centroids.row(c) - x.row(i)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out.push_back(model.classes[static_cast<std::size_t>(best)]);
  }
  return out;
}

}  // namespace ela::classify

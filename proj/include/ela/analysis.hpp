#pragma once

#include "ela/common.hpp"

#include <optional>
#include <ostream>

namespace ela::analysis {

/// Sample Pearson coefficient; nullopt when either vector has zero variance.
std::optional<double> pearson(const Vector& v, const Vector& w);

struct CorrelationMatrix {
  std::vector<std::string> labels;
  Matrix data;                                        // NaN where undefined
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> defined;

  Eigen::Index size() const { return data.rows(); }
  std::optional<double> at(Eigen::Index i, Eigen::Index j) const;
};

/// All-pairs correlation between rows (instances or fingerprints).
CorrelationMatrix instance_correlation(const Matrix& rows, std::vector<std::string> labels);
CorrelationMatrix instance_correlation(const LabeledMatrix& x);

/// All-pairs correlation between columns of a feature matrix.
CorrelationMatrix feature_correlation(const LabeledMatrix& x);

struct HeatmapOptions {
  std::string title;
  /// Gridline spacing (instances per problem); 0 disables block lines.
  int block_size = 5;
  int tile_size = 6;
  /// Show every label, or only the first label of each block when false.
  bool all_labels = false;
};

/// Deterministic self-contained SVG. Row 0 is drawn at the bottom-left.
void render_heatmap(const CorrelationMatrix& corr, std::ostream& out, const HeatmapOptions& options = {});
void render_heatmap(const CorrelationMatrix& corr, const std::string& path, const HeatmapOptions& options = {});

/// Diverging color for r in [-1, 1] as "#rrggbb".
std::string diverging_color(double r);

struct ProblemGroupSummary {
  int function_id;
  std::vector<int> instance_ids;
  std::optional<double> mean_within_correlation;
  /// Components of instances joined by correlation >= threshold, as instance ids.
  std::vector<std::vector<int>> components;
};

/// Groups rows by function id (labels of the form produced by to_string of an
/// InstanceLabel) and summarizes within-problem structure. threshold in (0, 1].
std::vector<ProblemGroupSummary> correlation_report(const CorrelationMatrix& corr,
                                                    const std::vector<InstanceLabel>& labels, double threshold);

struct LineSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Minimal deterministic SVG line chart.
void render_line_plot(const std::vector<LineSeries>& series, std::ostream& out, const LinePlotOptions& options);
void render_line_plot(const std::vector<LineSeries>& series, const std::string& path, const LinePlotOptions& options);

}  // namespace ela::analysis

#pragma once

#include "ela/analysis.hpp"
#include "ela/classify.hpp"
#include "ela/common.hpp"
#include "ela/embedding.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>

namespace ela::io {

/// Shortest decimal text that parses back to exactly `value`. NaN is written
/// as an empty string.
std::string format_double(double value);
/// Parses a decimal number; empty, "NA" and "nan" give NaN. `context` names
/// the cell in error messages.
double parse_double(std::string_view text, const std::string& context);

/// Splits one CSV record. Double-quoted fields may contain commas and "".
std::vector<std::string> split_csv_record(std::string_view line);

/// Header renames applied on import (external name -> schema name). The
/// label columns may be renamed to function_id / instance_id as well.
using ColumnMapping = std::map<std::string, std::string>;

/// Columns: function_id, instance_id, then one column per feature.
void write_matrix_csv(const LabeledMatrix& m, std::ostream& out);
void write_matrix_csv(const LabeledMatrix& m, const std::string& path);
LabeledMatrix read_matrix_csv(std::istream& in, const ColumnMapping& mapping = {});
LabeledMatrix read_matrix_csv(const std::string& path, const ColumnMapping& mapping = {});

/// Reorders the columns of `m` to `schema`. Missing columns raise a schema
/// error listing every missing name.
LabeledMatrix conform_columns(const LabeledMatrix& m, const std::vector<std::string>& schema);

/// First column "label", then one column per label. Masked entries are empty.
void write_correlation_csv(const analysis::CorrelationMatrix& corr, std::ostream& out);
void write_correlation_csv(const analysis::CorrelationMatrix& corr, const std::string& path);
analysis::CorrelationMatrix read_correlation_csv(std::istream& in);
analysis::CorrelationMatrix read_correlation_csv(const std::string& path);

inline constexpr int kModelFormatVersion = 1;

void write_model_json(const embedding::EmbeddingModel& model, std::ostream& out);
void write_model_json(const embedding::EmbeddingModel& model, const std::string& path);
embedding::EmbeddingModel read_model_json(std::istream& in);
embedding::EmbeddingModel read_model_json(const std::string& path);

void write_cv_reports(const std::vector<classify::CvReport>& reports, std::ostream& out);
void write_cv_reports(const std::vector<classify::CvReport>& reports, const std::string& path);
std::vector<classify::CvReport> read_cv_reports(std::istream& in);
std::vector<classify::CvReport> read_cv_reports(const std::string& path);

void write_correlation_report(const std::vector<analysis::ProblemGroupSummary>& groups, double threshold,
                              std::ostream& out);

/// Writes fold_<id>_train.csv and fold_<id>_test.csv for every fold into
/// `directory` (created if needed). Returns the written paths.
std::vector<std::string> export_folds(const LabeledMatrix& x, const classify::CvConfig& config,
                                      const std::string& directory);

/// Opens a file for writing, throwing an io error when it cannot be opened.
std::ofstream open_output(const std::string& path);
std::ifstream open_input(const std::string& path);

}  // namespace ela::io

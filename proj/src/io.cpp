#include "ela/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <sstream>

namespace ela::io {

using nlohmann::json;

namespace {

constexpr std::string_view kModelFormat = "ela-embedding-model";
constexpr std::string_view kReportFormat = "ela-cv-report";

std::string trim_line_end(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

int parse_int(std::string_view text, const std::string& context) {
  const double v = parse_double(text, context);
  if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 1e9)
    fail(ErrorCode::schema, context + ": expected an integer, got '" + std::string(text) + "'");
  return static_cast<int>(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols, const std::string& name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    fail(ErrorCode::schema, "model field '" + name + "' must have " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      fail(ErrorCode::schema, "model field '" + name + "' row " + std::to_string(i) + " must have " +
                                  std::to_string(cols) + " entries");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (const double x : v) a.push_back(x);
  return a;
}

json parse_json(std::istream& in, std::string_view what) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::schema, std::string(what) + ": " + e.what());
  }
}

json report_to_json(const classify::CvReport& r) {
  json folds = json::array();
  for (std::size_t f = 0; f < r.per_fold_accuracy.size(); ++f)
    folds.push_back({{"instance_id", r.fold_instance_ids[f]}, {"accuracy", r.per_fold_accuracy[f]}});
  const auto& c = r.config;
  return {{"config",
           {{"space", classify::to_string(c.space)},
            {"normalization", embedding::to_string(c.normalization)},
            {"rank", c.rank},
            {"classifier",
             {{"kind", classify::to_string(c.classifier.kind)},
              {"k", c.classifier.k},
              {"learning_rate", c.classifier.sgd.learning_rate},
              {"epochs", c.classifier.sgd.epochs},
              {"seed", c.classifier.sgd.seed}}}}},
          {"folds", std::move(folds)},
          {"mean_accuracy", r.mean_accuracy}};
}

classify::CvReport report_from_json(const json& j) {
  classify::CvReport r;
  const auto& c = j.at("config");
  r.config.space = classify::parse_space(c.at("space").get<std::string>());
  r.config.normalization = embedding::parse_normalization(c.at("normalization").get<std::string>());
  r.config.rank = c.at("rank").get<int>();
  const auto& k = c.at("classifier");
  r.config.classifier.kind = classify::parse_classifier(k.at("kind").get<std::string>());
  r.config.classifier.k = k.at("k").get<int>();
  r.config.classifier.sgd.learning_rate = k.at("learning_rate").get<double>();
  r.config.classifier.sgd.epochs = k.at("epochs").get<int>();
  r.config.classifier.sgd.seed = k.at("seed").get<std::uint64_t>();
  for (const auto& f : j.at("folds")) {
    r.fold_instance_ids.push_back(f.at("instance_id").get<int>());
    r.per_fold_accuracy.push_back(f.at("accuracy").get<double>());
  }
  r.mean_accuracy = j.at("mean_accuracy").get<double>();
  return r;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& context) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty() || text == "NA" || text == "nan" || text == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    fail(ErrorCode::schema, context + ": cannot parse '" + std::string(text) + "' as a number");
  return v;
}

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) fail(ErrorCode::schema, "unterminated quoted CSV field");
  fields.push_back(std::move(cur));
  return fields;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "' for reading");
  return in;
}

void write_matrix_csv(const LabeledMatrix& m, std::ostream& out) {
  m.validate();
  out << "function_id,instance_id";
  for (const auto& c : m.columns) out << ',' << csv_field(c);
  out << '\n';
  for (Eigen::Index i = 0; i < m.row_count(); ++i) {
    const auto& l = m.rows[static_cast<std::size_t>(i)];
    out << l.function_id << ',' << l.instance_id;
    for (Eigen::Index j = 0; j < m.column_count(); ++j) out << ',' << format_double(m.data(i, j));
    out << '\n';
  }
  if (!out) fail(ErrorCode::io, "failed writing matrix CSV");
}

void write_matrix_csv(const LabeledMatrix& m, const std::string& path) {
  auto out = open_output(path);
  write_matrix_csv(m, out);
}

LabeledMatrix read_matrix_csv(std::istream& in, const ColumnMapping& mapping) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::schema, "matrix CSV is empty");
  auto header = split_csv_record(trim_line_end(line));
  if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);
  for (auto& h : header)
    if (const auto it = mapping.find(h); it != mapping.end()) h = it->second;
  if (header.size() < 2 || header[0] != "function_id" || header[1] != "instance_id")
    fail(ErrorCode::schema, "matrix CSV must start with columns function_id,instance_id");

  LabeledMatrix m;
  m.columns.assign(header.begin() + 2, header.end());
  std::set<std::string> seen;
  for (const auto& c : m.columns)
    if (!seen.insert(c).second) fail(ErrorCode::schema, "duplicate column '" + c + "'");

  std::vector<std::vector<double>> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_line_end(line);
    if (line.empty()) continue;
    const auto fields = split_csv_record(line);
    if (fields.size() != header.size())
      fail(ErrorCode::schema, "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                                  " fields, got " + std::to_string(fields.size()));
    const std::string where = "line " + std::to_string(line_no);
    m.rows.push_back({parse_int(fields[0], where + " function_id"), parse_int(fields[1], where + " instance_id")});
    std::vector<double> row;
    for (std::size_t j = 2; j < fields.size(); ++j) row.push_back(parse_double(fields[j], where + " " + header[j]));
    values.push_back(std::move(row));
  }
  m.data.resize(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(m.columns.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < values[i].size(); ++j)
      m.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i][j];
  return m;
}

LabeledMatrix read_matrix_csv(const std::string& path, const ColumnMapping& mapping) {
  auto in = open_input(path);
  return read_matrix_csv(in, mapping);
}

LabeledMatrix conform_columns(const LabeledMatrix& m, const std::vector<std::string>& schema) {
  return m.select_columns(schema);
}

void write_correlation_csv(const analysis::CorrelationMatrix& corr, std::ostream& out) {
  out << "label";
  for (const auto& l : corr.labels) out << ',' << csv_field(l);
  out << '\n';
  for (Eigen::Index i = 0; i < corr.size(); ++i) {
    out << csv_field(corr.labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < corr.size(); ++j) {
      out << ',';
      if (corr.defined(i, j)) out << format_double(corr.data(i, j));
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::io, "failed writing correlation CSV");
}

void write_correlation_csv(const analysis::CorrelationMatrix& corr, const std::string& path) {
  auto out = open_output(path);
  write_correlation_csv(corr, out);
}

analysis::CorrelationMatrix read_correlation_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::schema, "correlation CSV is empty");
  const auto header = split_csv_record(trim_line_end(line));
  if (header.empty() || header[0] != "label") fail(ErrorCode::schema, "correlation CSV must start with 'label'");
  analysis::CorrelationMatrix corr;
  corr.labels.assign(header.begin() + 1, header.end());
  const auto n = static_cast<Eigen::Index>(corr.labels.size());
  corr.data = Matrix::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  corr.defined.setConstant(n, n, false);
  Eigen::Index i = 0;
  while (std::getline(in, line)) {
    line = trim_line_end(line);
    if (line.empty()) continue;
    if (i >= n) fail(ErrorCode::schema, "correlation CSV has more rows than labels");
    const auto fields = split_csv_record(line);
    if (static_cast<Eigen::Index>(fields.size()) != n + 1 || fields[0] != corr.labels[static_cast<std::size_t>(i)])
      fail(ErrorCode::schema, "correlation CSV row " + std::to_string(i + 1) + " does not match the header");
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = parse_double(fields[static_cast<std::size_t>(j + 1)], "correlation cell");
      corr.data(i, j) = v;
      corr.defined(i, j) = !std::isnan(v);
    }
    ++i;
  }
  if (i != n) fail(ErrorCode::schema, "correlation CSV is not square");
  return corr;
}

analysis::CorrelationMatrix read_correlation_csv(const std::string& path) {
  auto in = open_input(path);
  return read_correlation_csv(in);
}

void write_model_json(const embedding::EmbeddingModel& model, std::ostream& out) {
  json labels = json::array();
  for (const auto& l : model.row_labels()) labels.push_back({l.function_id, l.instance_id});
  json scaler = nullptr;
  if (model.scaler()) scaler = {{"min", vector_to_json(model.scaler()->min)}, {"max", vector_to_json(model.scaler()->max)}};
  json doc = {{"format", kModelFormat},
              {"version", kModelFormatVersion},
              {"normalization", embedding::to_string(model.normalization())},
              {"minmax", std::move(scaler)},
              {"row_labels", std::move(labels)},
              {"column_labels", model.column_labels()},
              {"singular_values", vector_to_json(model.singular_values())},
              {"u", matrix_to_json(model.u())},
              {"v", matrix_to_json(model.v())}};
  const auto& svd = model.svd();
  if (svd.u_lo.size() == svd.u.size() && svd.v_lo.size() == svd.v.size() && svd.sigma_lo.size() == svd.sigma.size()) {
    doc["singular_values_lo"] = vector_to_json(svd.sigma_lo);
    doc["u_lo"] = matrix_to_json(svd.u_lo);
    doc["v_lo"] = matrix_to_json(svd.v_lo);
  }
  out << doc.dump(1) << '\n';
  if (!out) fail(ErrorCode::io, "failed writing model JSON");
}

void write_model_json(const embedding::EmbeddingModel& model, const std::string& path) {
  auto out = open_output(path);
  write_model_json(model, out);
}

embedding::EmbeddingModel read_model_json(std::istream& in) {
  const json doc = parse_json(in, "model JSON");
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) fail(ErrorCode::schema, "not an embedding model file");
    if (doc.at("version").get<int>() != kModelFormatVersion)
      fail(ErrorCode::schema, "unsupported model format version " + doc.at("version").dump());
    std::vector<InstanceLabel> rows;
    for (const auto& l : doc.at("row_labels")) rows.push_back({l.at(0).get<int>(), l.at(1).get<int>()});
    auto columns = doc.at("column_labels").get<std::vector<std::string>>();
    embedding::Svd svd;
    svd.sigma = vector_from_json(doc.at("singular_values"));
    const auto k = svd.sigma.size();
    svd.u = matrix_from_json(doc.at("u"), static_cast<Eigen::Index>(rows.size()), k, "u");
    svd.v = matrix_from_json(doc.at("v"), static_cast<Eigen::Index>(columns.size()), k, "v");
    // low-order parts are optional; all three or none
    if (doc.contains("u_lo") || doc.contains("v_lo") || doc.contains("singular_values_lo")) {
      svd.sigma_lo = vector_from_json(doc.at("singular_values_lo"));
      if (svd.sigma_lo.size() != svd.sigma.size()) fail(ErrorCode::schema, "singular_values_lo has the wrong length");
      svd.u_lo = matrix_from_json(doc.at("u_lo"), svd.u.rows(), k, "u_lo");
      svd.v_lo = matrix_from_json(doc.at("v_lo"), svd.v.rows(), k, "v_lo");
    }
    std::optional<embedding::MinMaxScaler> scaler;
    if (embedding::parse_normalization(doc.at("normalization").get<std::string>()) ==
        embedding::Normalization::minmax) {
      const auto& mm = doc.at("minmax");
      scaler = embedding::MinMaxScaler{vector_from_json(mm.at("min")), vector_from_json(mm.at("max"))};
      if (scaler->min.size() != static_cast<Eigen::Index>(columns.size()) || scaler->max.size() != scaler->min.size())
        fail(ErrorCode::schema, "min-max parameters do not match the column labels");
    }
    return embedding::EmbeddingModel(std::move(svd), std::move(scaler), std::move(rows), std::move(columns));
  } catch (const json::exception& e) {
    fail(ErrorCode::schema, std::string("model JSON: ") + e.what());
  }
}

embedding::EmbeddingModel read_model_json(const std::string& path) {
  auto in = open_input(path);
  return read_model_json(in);
}

void write_cv_reports(const std::vector<classify::CvReport>& reports, std::ostream& out) {
  json list = json::array();
  for (const auto& r : reports) list.push_back(report_to_json(r));
  const json doc = {{"format", kReportFormat}, {"version", 1}, {"reports", std::move(list)}};
  out << doc.dump(1) << '\n';
  if (!out) fail(ErrorCode::io, "failed writing report JSON");
}

void write_cv_reports(const std::vector<classify::CvReport>& reports, const std::string& path) {
  auto out = open_output(path);
  write_cv_reports(reports, out);
}

std::vector<classify::CvReport> read_cv_reports(std::istream& in) {
  const json doc = parse_json(in, "report JSON");
  try {
    if (doc.at("format").get<std::string>() != kReportFormat) fail(ErrorCode::schema, "not a CV report file");
    std::vector<classify::CvReport> out;
    for (const auto& r : doc.at("reports")) out.push_back(report_from_json(r));
    return out;
  } catch (const json::exception& e) {
    fail(ErrorCode::schema, std::string("report JSON: ") + e.what());
  }
}

std::vector<classify::CvReport> read_cv_reports(const std::string& path) {
  auto in = open_input(path);
  return read_cv_reports(in);
}

void write_correlation_report(const std::vector<analysis::ProblemGroupSummary>& groups, double threshold,
                              std::ostream& out) {
  json list = json::array();
  for (const auto& g : groups) {
    json mean = nullptr;
    if (g.mean_within_correlation) mean = *g.mean_within_correlation;
    list.push_back({{"function_id", g.function_id},
                    {"instance_ids", g.instance_ids},
                    {"mean_within_correlation", std::move(mean)},
                    {"components", g.components}});
  }
  out << json{{"threshold", threshold}, {"problems", std::move(list)}}.dump(1) << '\n';
  if (!out) fail(ErrorCode::io, "failed writing correlation report");
}

std::vector<std::string> export_folds(const LabeledMatrix& x, const classify::CvConfig& config,
                                      const std::string& directory) {
  x.validate();
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) fail(ErrorCode::io, "cannot create directory '" + directory + "': " + ec.message());
  const auto folds = classify::stratified_folds(x.rows);
  std::vector<std::string> paths;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto data = classify::prepare_fold(x, folds, f, config);
    const auto stem = (std::filesystem::path(directory) / ("fold_" + std::to_string(folds[f].instance_id))).string();
    write_matrix_csv(data.train, stem + "_train.csv");
    write_matrix_csv(data.test, stem + "_test.csv");
    paths.push_back(stem + "_train.csv");
    paths.push_back(stem + "_test.csv");
  }
  return paths;
}

}  // namespace ela::io

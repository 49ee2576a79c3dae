// Command-line front end. Every stage reads and writes files only; the
// library is reached exclusively through the C interface.

#include "ela/ela.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LibraryError : std::runtime_error {
  LibraryError(ela_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  ela_status status;
};

void check(ela_status s) {
  if (s != ELA_OK) throw LibraryError(s, ela_last_error());
}

int exit_code(ela_status s) {
  switch (s) {
    case ELA_OK: return 0;
    case ELA_ERR_INVALID_ARGUMENT:
    case ELA_ERR_UNSUPPORTED: return kExitUsage;
    case ELA_ERR_NUMERICAL:
    case ELA_ERR_RANK_DEFICIENT: return kExitNumerical;
    default: return kExitData;
  }
}

template <auto Free>
struct Deleter {
  template <class T>
  void operator()(T* p) const {
    Free(p);
  }
};

using Matrix = std::unique_ptr<ela_matrix, Deleter<ela_matrix_free>>;
using Model = std::unique_ptr<ela_model, Deleter<ela_model_free>>;
using Corr = std::unique_ptr<ela_corr, Deleter<ela_corr_free>>;
using Report = std::unique_ptr<ela_cv_report, Deleter<ela_cv_report_free>>;

template <class Handle, class F>
Handle make(F&& f) {
  typename Handle::pointer raw = nullptr;
  check(f(&raw));
  return Handle(raw);
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

// ---- config ----------------------------------------------------------------

// Top-level keys of the run config. Each command reads the keys it needs.
const std::set<std::string> kConfigKeys{"suite",       "sampler",     "sample_count", "replications",
                                        "threads",     "feature_subset", "normalization", "rank",
                                        "ranks",       "sensitivity", "correlation",  "classifier",
                                        "space",       "column_mapping"};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    // feature runs must name their seed explicitly
    if (key == "seed") throw UsageError("the base seed is not read from the config; pass --seed");
    if (!kConfigKeys.contains(key)) throw UsageError("unknown config key '" + key + "'");
  }
  return doc;
}

// Copies config[path...] into `dst` unless the command-line option was given.
template <class T>
void from_config(const json& cfg, std::initializer_list<const char*> path, T& dst, const CLI::Option* flag) {
  if (flag != nullptr && flag->count() > 0) return;
  const json* node = &cfg;
  std::string name;
  for (const char* key : path) {
    name += (name.empty() ? "" : ".") + std::string(key);
    if (!node->is_object() || !node->contains(key)) return;
    node = &(*node)[key];
  }
  try {
    dst = node->get<T>();
  } catch (const json::exception&) {
    throw UsageError("config key '" + name + "' has the wrong type");
  }
}

void require_member(const std::string& value, const std::set<std::string>& allowed, const std::string& what) {
  if (!allowed.contains(value)) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw UsageError("invalid " + what + " '" + value + "' (expected one of: " + list + ")");
  }
}

const std::set<std::string> kNormalizations{"none", "minmax"};

std::vector<std::string> schema_names() {
  std::vector<std::string> names;
  for (size_t i = 0; i < ela_feature_count(); ++i) names.emplace_back(ela_feature_name(i));
  return names;
}

void write_json(const json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LibraryError(ELA_ERR_IO, "cannot open '" + path + "' for writing");
  out << doc.dump(1) << '\n';
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

// ---- features --------------------------------------------------------------

struct FeaturesArgs {
  std::string config, out, provenance;
  std::uint64_t seed = 0;
  std::vector<int> functions, instances;
  int dimension = 5;
  std::string sampler = "sobol";
  int sample_count = 1250;
  int replications = 100;
  unsigned threads = 0;
  std::vector<std::string> subset;
  std::map<std::string, const CLI::Option*> flags;
};

int run_features(FeaturesArgs& a) {
  const json cfg = load_config(a.config);
  from_config(cfg, {"suite", "functions"}, a.functions, a.flags["functions"]);
  from_config(cfg, {"suite", "instances"}, a.instances, a.flags["instances"]);
  from_config(cfg, {"suite", "dimension"}, a.dimension, a.flags["dimension"]);
  from_config(cfg, {"sampler"}, a.sampler, a.flags["sampler"]);
  from_config(cfg, {"sample_count"}, a.sample_count, a.flags["samples"]);
  from_config(cfg, {"replications"}, a.replications, a.flags["replications"]);
  from_config(cfg, {"threads"}, a.threads, a.flags["threads"]);
  from_config(cfg, {"feature_subset"}, a.subset, a.flags["features"]);
  if (a.functions.empty()) {
    a.functions.resize(24);
    std::iota(a.functions.begin(), a.functions.end(), 1);
  }
  if (a.instances.empty()) a.instances = {1, 2, 3, 4, 5};
  require_member(a.sampler, {"sobol", "uniform"}, "sampler");
  const auto names = schema_names();
  for (const auto& s : a.subset)
    if (std::find(names.begin(), names.end(), s) == names.end()) throw UsageError("unknown feature '" + s + "'");
  if (a.provenance.empty()) a.provenance = with_suffix(a.out, ".provenance.json");

  ela_feature_options options{a.sampler.c_str(), a.sample_count, a.replications};
  const auto start = std::chrono::steady_clock::now();
  auto matrix = make<Matrix>([&](ela_matrix** out) {
    return ela_feature_matrix_compute(a.functions.data(), a.functions.size(), a.instances.data(), a.instances.size(),
                                      a.dimension, &options, a.seed, a.threads, out);
  });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!a.subset.empty()) {
    const auto cs = c_strings(a.subset);
    matrix = make<Matrix>([&](ela_matrix** out) { return ela_matrix_select_columns(matrix.get(), cs.data(), cs.size(), out); });
  }
  check(ela_matrix_write_csv(matrix.get(), a.out.c_str()));

  json seeds = json::array();
  for (const int f : a.functions)
    for (const int i : a.instances)
      seeds.push_back({{"function_id", f}, {"instance_id", i}, {"seed", ela_instance_seed(a.seed, f, i)}});
  json columns = json::array();
  for (size_t c = 0; c < ela_matrix_cols(matrix.get()); ++c) columns.push_back(ela_matrix_column_name(matrix.get(), c));
  write_json({{"command", "features"},
              {"library_version", ela_version()},
              {"seed", a.seed},
              {"suite", {{"functions", a.functions}, {"instances", a.instances}, {"dimension", a.dimension}}},
              {"sampler", a.sampler},
              {"sample_count", a.sample_count},
              {"replications", a.replications},
              {"columns", std::move(columns)},
              {"instance_seeds", std::move(seeds)},
              {"timings", {{"total_seconds", seconds}}},
              {"output", a.out}},
             a.provenance);
  std::cout << "wrote " << ela_matrix_rows(matrix.get()) << "x" << ela_matrix_cols(matrix.get()) << " matrix to "
            << a.out << " (" << seconds << " s)\n";
  return 0;
}

// ---- embed -----------------------------------------------------------------

struct EmbedArgs {
  std::string config, input, model, fingerprints, normalization = "none";
  int rank = 0;
  std::map<std::string, const CLI::Option*> flags;
};

int run_embed(EmbedArgs& a) {
  const json cfg = load_config(a.config);
  from_config(cfg, {"normalization"}, a.normalization, a.flags["normalization"]);
  from_config(cfg, {"rank"}, a.rank, a.flags["rank"]);
  require_member(a.normalization, kNormalizations, "normalization");
  auto x = make<Matrix>([&](ela_matrix** out) { return ela_matrix_read_csv(a.input.c_str(), nullptr, nullptr, 0, out); });
  auto model = make<Model>([&](ela_model** out) { return ela_model_fit(x.get(), a.normalization.c_str(), out); });
  const int rank = a.rank == 0 ? ela_model_rank_full(model.get()) : a.rank;
  check(ela_model_save_json(model.get(), a.model.c_str()));
  auto fp = make<Matrix>([&](ela_matrix** out) { return ela_model_fingerprints(model.get(), x.get(), rank, out); });
  check(ela_matrix_write_csv(fp.get(), a.fingerprints.c_str()));
  std::cout << "rank " << rank << " of " << ela_model_rank_full(model.get()) << "; model " << a.model
            << ", fingerprints " << a.fingerprints << "\n";
  return 0;
}

// ---- correlate -------------------------------------------------------------

struct CorrelateArgs {
  std::string config, input, mode = "instances", csv, svg, title, report;
  int block_size = -1;
  bool all_labels = false;
  double threshold = 0.9;
  std::map<std::string, const CLI::Option*> flags;
};

int run_correlate(CorrelateArgs& a) {
  const json cfg = load_config(a.config);
  from_config(cfg, {"correlation", "block_size"}, a.block_size, a.flags["block-size"]);
  from_config(cfg, {"correlation", "threshold"}, a.threshold, a.flags["threshold"]);
  from_config(cfg, {"correlation", "title"}, a.title, a.flags["title"]);
  require_member(a.mode, {"instances", "features"}, "mode");
  if (a.block_size < 0) a.block_size = a.mode == "instances" ? 5 : 0;
  auto x = make<Matrix>([&](ela_matrix** out) { return ela_matrix_read_csv(a.input.c_str(), nullptr, nullptr, 0, out); });
  auto corr = make<Corr>([&](ela_corr** out) {
    return a.mode == "instances" ? ela_corr_instances(x.get(), out) : ela_corr_features(x.get(), out);
  });
  if (a.csv.empty()) a.csv = with_suffix(a.input, "_" + a.mode + "_corr.csv");
  if (a.svg.empty()) a.svg = with_suffix(a.input, "_" + a.mode + "_corr.svg");
  check(ela_corr_write_csv(corr.get(), a.csv.c_str()));
  check(ela_corr_write_svg(corr.get(), a.svg.c_str(), a.title.c_str(), a.block_size, a.all_labels ? 1 : 0));
  if (!a.report.empty()) {
    if (a.mode != "instances") throw UsageError("--report requires --mode instances");
    check(ela_corr_write_report(corr.get(), a.threshold, a.report.c_str()));
  }
  std::cout << ela_corr_size(corr.get()) << "x" << ela_corr_size(corr.get()) << " correlation written to " << a.csv
            << " and " << a.svg << "\n";
  return 0;
}

// ---- sensitivity -----------------------------------------------------------

struct SensitivityArgs {
  std::string config, input, table, svg, summary, normalization = "none";
  int r_min = 6, r_max = 0;
  std::map<std::string, const CLI::Option*> flags;
};

int run_sensitivity(SensitivityArgs& a) {
  const json cfg = load_config(a.config);
  from_config(cfg, {"normalization"}, a.normalization, a.flags["normalization"]);
  from_config(cfg, {"sensitivity", "r_min"}, a.r_min, a.flags["r-min"]);
  from_config(cfg, {"sensitivity", "r_max"}, a.r_max, a.flags["r-max"]);
  require_member(a.normalization, kNormalizations, "normalization");
  auto x = make<Matrix>([&](ela_matrix** out) { return ela_matrix_read_csv(a.input.c_str(), nullptr, nullptr, 0, out); });
  auto model = make<Model>([&](ela_model** out) { return ela_model_fit(x.get(), a.normalization.c_str(), out); });
  const int full = ela_model_rank_full(model.get());
  if (a.r_max == 0) a.r_max = full;
  if (a.r_min < 1 || a.r_min > a.r_max || a.r_max > full)
    throw UsageError("rank range must satisfy 1 <= r-min <= r-max <= " + std::to_string(full));

  std::vector<double> sigma(static_cast<size_t>(full));
  check(ela_model_singular_values(model.get(), sigma.data(), sigma.size()));
  int scree = 0;
  check(ela_cattell_scree(sigma.data(), sigma.size(), &scree));

  if (a.table.empty()) a.table = with_suffix(a.input, "_sensitivity.csv");
  if (a.svg.empty()) a.svg = with_suffix(a.input, "_sensitivity.svg");
  std::ofstream table(a.table, std::ios::binary);
  if (!table) throw LibraryError(ELA_ERR_IO, "cannot open '" + a.table + "' for writing");
  table << "rank,frobenius_error,tail_singular_norm\n";
  std::vector<double> xs, ys;
  char buf[64];
  for (int r = a.r_min; r <= a.r_max; ++r) {
    double err = 0.0;
    check(ela_model_low_rank_error(model.get(), x.get(), r, &err));
    double tail = 0.0;
    check(ela_model_tail_norm(model.get(), r, &tail));
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", err, tail);
    table << r << ',' << buf << '\n';
    xs.push_back(r);
    ys.push_back(err);
  }
  table.close();

  const char* name = "frobenius error";
  const double* xp = xs.data();
  const double* yp = ys.data();
  const size_t n = xs.size();
  check(ela_line_plot_svg(a.svg.c_str(), "Low-rank approximation error", "number of singular values",
                          "||X - X_r||_F", 1, &name, &xp, &yp, &n));
  if (!a.summary.empty())
    write_json({{"rank_full", full}, {"singular_values", sigma}, {"scree_estimate", scree},
                {"r_min", a.r_min}, {"r_max", a.r_max}},
               a.summary);
  std::cout << "scree estimate: " << scree << "\n";
  return 0;
}

// ---- project ---------------------------------------------------------------

struct ProjectArgs {
  std::string config, model, input, mapping, fingerprints, csv, svg, title;
  int rank = 0;
  int block_size = 5;
  std::map<std::string, const CLI::Option*> flags;
};

int run_project(ProjectArgs& a) {
  const json cfg = load_config(a.config);
  from_config(cfg, {"rank"}, a.rank, a.flags["rank"]);
  from_config(cfg, {"correlation", "block_size"}, a.block_size, a.flags["block-size"]);
  from_config(cfg, {"correlation", "title"}, a.title, a.flags["title"]);
  std::map<std::string, std::string> mapping;
  from_config(cfg, {"column_mapping"}, mapping, nullptr);
  if (!a.mapping.empty()) {
    std::ifstream in(a.mapping);
    if (!in) throw UsageError("cannot open mapping file '" + a.mapping + "'");
    try {
      mapping = json::parse(in).get<std::map<std::string, std::string>>();
    } catch (const json::exception& e) {
      throw UsageError("mapping file must be a JSON object of strings: " + std::string(e.what()));
    }
  }
  std::vector<std::string> from, to;
  for (const auto& [k, v] : mapping) {
    from.push_back(k);
    to.push_back(v);
  }
  const auto from_c = c_strings(from), to_c = c_strings(to);

  auto model = make<Model>([&](ela_model** out) { return ela_model_load_json(a.model.c_str(), out); });
  const int rank = a.rank == 0 ? ela_model_rank_full(model.get()) : a.rank;
  auto external = make<Matrix>([&](ela_matrix** out) {
    return ela_matrix_read_csv(a.input.c_str(), from_c.data(), to_c.data(), from_c.size(), out);
  });
  auto fp = make<Matrix>([&](ela_matrix** out) { return ela_model_fingerprints(model.get(), external.get(), rank, out); });
  auto training = make<Matrix>([&](ela_matrix** out) { return ela_model_training_fingerprints(model.get(), rank, out); });
  auto combined = make<Matrix>([&](ela_matrix** out) { return ela_matrix_concat_rows(training.get(), fp.get(), out); });
  auto corr = make<Corr>([&](ela_corr** out) { return ela_corr_instances(combined.get(), out); });

  if (a.fingerprints.empty()) a.fingerprints = with_suffix(a.input, "_fingerprints.csv");
  if (a.csv.empty()) a.csv = with_suffix(a.input, "_projected_corr.csv");
  if (a.svg.empty()) a.svg = with_suffix(a.input, "_projected_corr.svg");
  check(ela_matrix_write_csv(fp.get(), a.fingerprints.c_str()));
  check(ela_corr_write_csv(corr.get(), a.csv.c_str()));
  check(ela_corr_write_svg(corr.get(), a.svg.c_str(), a.title.c_str(), a.block_size, 0));
  std::cout << ela_matrix_rows(fp.get()) << " rows projected at rank " << rank << "; " << ela_corr_size(corr.get())
            << "x" << ela_corr_size(corr.get()) << " correlation written to " << a.csv << "\n";
  return 0;
}

// ---- classify --------------------------------------------------------------

struct ClassifyArgs {
  std::string config, input, report, svg, export_dir;
  std::string space = "embedded", normalization = "none", classifier = "knn";
  std::vector<int> ranks;
  int k = 4, epochs = 1000;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
  std::map<std::string, const CLI::Option*> flags;
};

int run_classify(ClassifyArgs& a) {
  const json cfg = load_config(a.config);
  from_config(cfg, {"space"}, a.space, a.flags["space"]);
  from_config(cfg, {"normalization"}, a.normalization, a.flags["normalization"]);
  from_config(cfg, {"ranks"}, a.ranks, a.flags["ranks"]);
  from_config(cfg, {"classifier", "name"}, a.classifier, a.flags["classifier"]);
  from_config(cfg, {"classifier", "k"}, a.k, a.flags["k"]);
  from_config(cfg, {"classifier", "learning_rate"}, a.learning_rate, a.flags["learning-rate"]);
  from_config(cfg, {"classifier", "epochs"}, a.epochs, a.flags["epochs"]);
  from_config(cfg, {"classifier", "seed"}, a.seed, a.flags["classifier-seed"]);
  require_member(a.space, {"embedded", "original"}, "space");
  require_member(a.normalization, kNormalizations, "normalization");
  require_member(a.classifier, {"knn", "sgd", "nearest_centroid"}, "classifier");
  if (a.space == "original" || a.ranks.empty()) a.ranks = {0};

  auto x = make<Matrix>([&](ela_matrix** out) { return ela_matrix_read_csv(a.input.c_str(), nullptr, nullptr, 0, out); });
  const double full = static_cast<double>(ela_matrix_cols(x.get()));
  std::vector<Report> reports;
  std::vector<double> xs, ys;
  for (const int rank : a.ranks) {
    ela_cv_config c{a.space.c_str(), a.normalization.c_str(), rank, a.classifier.c_str(), a.k, a.learning_rate,
                    a.epochs, a.seed};
    reports.push_back(make<Report>([&](ela_cv_report** out) { return ela_cv_evaluate(x.get(), &c, out); }));
    const double acc = ela_cv_report_mean_accuracy(reports.back().get());
    xs.push_back(rank == 0 ? full : rank);
    ys.push_back(acc);
    std::cout << a.classifier << " " << a.space << " " << a.normalization << " rank "
              << (rank == 0 ? std::string("full") : std::to_string(rank)) << ": mean accuracy " << acc << "\n";
    if (!a.export_dir.empty()) {
      const auto dir = a.ranks.size() > 1 ? (std::filesystem::path(a.export_dir) / ("rank_" + std::to_string(rank))).string()
                                          : a.export_dir;
      check(ela_cv_export_folds(x.get(), &c, dir.c_str()));
    }
  }
  if (a.report.empty()) a.report = with_suffix(a.input, "_cv.json");
  if (a.svg.empty()) a.svg = with_suffix(a.input, "_cv.svg");
  std::vector<const ela_cv_report*> raw;
  for (const auto& r : reports) raw.push_back(r.get());
  check(ela_cv_reports_write_json(raw.data(), raw.size(), a.report.c_str()));

  const std::string name = a.classifier + " (" + a.space + ", " + a.normalization + ")";
  const char* np = name.c_str();
  const double* xp = xs.data();
  const double* yp = ys.data();
  const size_t n = xs.size();
  check(ela_line_plot_svg(a.svg.c_str(), "Cross-validated accuracy", "number of singular values", "mean accuracy", 1,
                          &np, &xp, &yp, &n));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landscape features, SVD fingerprints and instance-similarity experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ela_version()));

  FeaturesArgs fa;
  auto* features = app.add_subcommand("features", "Compute the feature matrix of a problem suite");
  features->add_option("--config", fa.config, "JSON run config")->check(CLI::ExistingFile);
  features->add_option("--seed", fa.seed, "Base seed (required)")->required();
  features->add_option("-o,--out", fa.out, "Output matrix CSV")->required();
  features->add_option("--provenance", fa.provenance, "Provenance JSON (default: output path with .provenance.json)");
  fa.flags["functions"] = features->add_option("--functions", fa.functions, "Function ids")->delimiter(',');
  fa.flags["instances"] = features->add_option("--instances", fa.instances, "Instance ids")->delimiter(',');
  fa.flags["dimension"] = features->add_option("--dimension", fa.dimension, "Search-space dimension");
  fa.flags["sampler"] = features->add_option("--sampler", fa.sampler, "sobol or uniform");
  fa.flags["samples"] = features->add_option("--samples", fa.sample_count, "Points per design");
  fa.flags["replications"] = features->add_option("--replications", fa.replications, "Designs per instance");
  fa.flags["threads"] = features->add_option("--threads", fa.threads, "Worker threads (0 = all)");
  fa.flags["features"] = features->add_option("--features", fa.subset, "Feature subset")->delimiter(',');

  EmbedArgs ea;
  auto* embed = app.add_subcommand("embed", "Fit the SVD embedding and write fingerprints");
  embed->add_option("--config", ea.config, "JSON run config")->check(CLI::ExistingFile);
  embed->add_option("-i,--input", ea.input, "Feature matrix CSV")->required();
  embed->add_option("--model", ea.model, "Output model JSON")->required();
  embed->add_option("--fingerprints", ea.fingerprints, "Output fingerprint CSV")->required();
  ea.flags["rank"] = embed->add_option("--rank", ea.rank, "Fingerprint length (0 = full)");
  ea.flags["normalization"] = embed->add_option("--normalization", ea.normalization, "none or minmax");

  CorrelateArgs ca;
  auto* correlate = app.add_subcommand("correlate", "Pearson correlation matrix with CSV and SVG output");
  correlate->add_option("--config", ca.config, "JSON run config")->check(CLI::ExistingFile);
  correlate->add_option("-i,--input", ca.input, "Matrix CSV (features or fingerprints)")->required();
  correlate->add_option("--mode", ca.mode, "instances or features");
  correlate->add_option("--csv", ca.csv, "Output correlation CSV");
  correlate->add_option("--svg", ca.svg, "Output heatmap SVG");
  ca.flags["title"] = correlate->add_option("--title", ca.title, "Heatmap title");
  ca.flags["block-size"] = correlate->add_option("--block-size", ca.block_size, "Gridline spacing (0 = none)");
  correlate->add_flag("--all-labels", ca.all_labels, "Label every row and column");
  correlate->add_option("--report", ca.report, "Per-problem component report JSON");
  ca.flags["threshold"] = correlate->add_option("--threshold", ca.threshold, "Component threshold in (0, 1]");

  SensitivityArgs sa;
  auto* sensitivity = app.add_subcommand("sensitivity", "Low-rank approximation error sweep and scree estimate");
  sensitivity->add_option("--config", sa.config, "JSON run config")->check(CLI::ExistingFile);
  sensitivity->add_option("-i,--input", sa.input, "Feature matrix CSV")->required();
  sa.flags["r-min"] = sensitivity->add_option("--r-min", sa.r_min, "Smallest rank (default 6)");
  sa.flags["r-max"] = sensitivity->add_option("--r-max", sa.r_max, "Largest rank (default full)");
  sa.flags["normalization"] = sensitivity->add_option("--normalization", sa.normalization, "none or minmax");
  sensitivity->add_option("--table", sa.table, "Output error table CSV");
  sensitivity->add_option("--svg", sa.svg, "Output line plot SVG");
  sensitivity->add_option("--summary", sa.summary, "Output JSON with singular values and scree estimate");

  ProjectArgs pa;
  auto* project = app.add_subcommand("project", "Project external feature vectors into a fitted embedding");
  project->add_option("--config", pa.config, "JSON run config")->check(CLI::ExistingFile);
  project->add_option("--model", pa.model, "Model JSON")->required();
  project->add_option("-i,--input", pa.input, "External feature CSV")->required();
  project->add_option("--mapping", pa.mapping, "JSON object renaming external columns");
  pa.flags["rank"] = project->add_option("--rank", pa.rank, "Fingerprint length (0 = full)");
  project->add_option("--fingerprints", pa.fingerprints, "Output fingerprint CSV");
  project->add_option("--csv", pa.csv, "Output correlation CSV (training + external)");
  project->add_option("--svg", pa.svg, "Output heatmap SVG");
  pa.flags["title"] = project->add_option("--title", pa.title, "Heatmap title");
  pa.flags["block-size"] = project->add_option("--block-size", pa.block_size, "Gridline spacing (0 = none)");

  ClassifyArgs la;
  auto* classify = app.add_subcommand("classify", "Leave-one-instance-out classification");
  classify->add_option("--config", la.config, "JSON run config")->check(CLI::ExistingFile);
  classify->add_option("-i,--input", la.input, "Feature matrix CSV")->required();
  classify->add_option("--report", la.report, "Output CV report JSON");
  classify->add_option("--svg", la.svg, "Output accuracy-vs-rank SVG");
  classify->add_option("--export-folds", la.export_dir, "Write per-fold train/test CSVs here");
  la.flags["space"] = classify->add_option("--space", la.space, "embedded or original");
  la.flags["normalization"] = classify->add_option("--normalization", la.normalization, "none or minmax");
  la.flags["ranks"] = classify->add_option("--ranks", la.ranks, "Embedding ranks (0 = full)")->delimiter(',');
  la.flags["classifier"] = classify->add_option("--classifier", la.classifier, "knn, sgd or nearest_centroid");
  la.flags["k"] = classify->add_option("--k", la.k, "Neighbours for knn");
  la.flags["learning-rate"] = classify->add_option("--learning-rate", la.learning_rate, "SGD step size");
  la.flags["epochs"] = classify->add_option("--epochs", la.epochs, "SGD epochs");
  la.flags["classifier-seed"] = classify->add_option("--classifier-seed", la.seed, "SGD shuffling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*features) return run_features(fa);
    if (*embed) return run_embed(ea);
    if (*correlate) return run_correlate(ca);
    if (*sensitivity) return run_sensitivity(sa);
    if (*project) return run_project(pa);
    if (*classify) return run_classify(la);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LibraryError& e) {
    std::cerr << "error (" << ela_status_name(e.status) << "): " << e.what() << "\n";
    return exit_code(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

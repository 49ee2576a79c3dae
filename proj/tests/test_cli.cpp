// Runs the command-line tool as a subprocess and inspects its artifacts.
#include "doctest.h"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

using nlohmann::json;

namespace {

struct Dir {
  Dir() {
    char templ[] = "/tmp/ela_cli_XXXXXX";
    REQUIRE(mkdtemp(templ) != nullptr);
    path = templ;
  }
  ~Dir() {
    if (std::system(("rm -rf '" + path + "'").c_str()) != 0) MESSAGE("could not remove " << path);
  }
  std::string operator/(const std::string& name) const { return path + "/" + name; }
  std::string path;
};

int run(const std::string& args) {
  const std::string cmd = std::string("'") + ELA_CLI_PATH + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string field;
  while (std::getline(s, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(split(line));
  return rows;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

// One shared smoke matrix: 24 x 5 instances, d = 5, 100 points, 1 replication.
const Dir& smoke() {
  static Dir dir;
  static const bool ok = run("features --seed 7 --samples 100 --replications 1 -o " + (dir / "f.csv")) == 0;
  REQUIRE(ok);
  return dir;
}

}  // namespace

TEST_CASE("features smoke run") {
  const Dir& d = smoke();
  const auto rows = read_csv(d / "f.csv");
  REQUIRE(rows.size() == 121);
  CHECK(rows[0].size() == 40);
  CHECK(rows[0][0] == "function_id");
  CHECK(rows[120][0] == "24");
  CHECK(rows[120][1] == "5");
  for (std::size_t r = 1; r < rows.size(); ++r)
    for (std::size_t c = 2; c < rows[r].size(); ++c) CHECK(std::isfinite(std::stod(rows[r][c])));

  const json prov = read_json(d / "f.provenance.json");
  CHECK(prov["seed"] == 7);
  CHECK(prov["instance_seeds"].size() == 120);
  CHECK(prov["replications"] == 1);
  CHECK(prov["columns"].size() == 38);

  Dir again;
  REQUIRE(run("features --seed 7 --samples 100 --replications 1 --threads 3 -o " + (again / "f.csv")) == 0);
  CHECK(slurp(again / "f.csv") == slurp(d / "f.csv"));
  REQUIRE(run("features --seed 8 --samples 100 --replications 1 -o " + (again / "g.csv")) == 0);
  CHECK(slurp(again / "g.csv") != slurp(d / "f.csv"));
}

TEST_CASE("features usage errors") {
  Dir d;
  CHECK(run("features --samples 100 -o " + (d / "x.csv")) == 1);
  CHECK(run("features --seed 1 --sampler halton -o " + (d / "x.csv")) == 1);
  CHECK(run("features --seed 1 --features nope -o " + (d / "x.csv")) == 1);
  CHECK(run("features --seed 1 --dimension 100000 --functions 1 --instances 1 --samples 100 --replications 1 -o " +
            (d / "x.csv")) == 1);
  CHECK(run("features --seed 1 --dimension 100 --functions 1 --instances 1 --samples 100 --replications 1 -o " +
            (d / "x.csv")) == 1);
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("--help") == 0);
}

TEST_CASE("feature subset of 18 names") {
  const Dir& d = smoke();
  const auto header = read_csv(d / "f.csv")[0];
  std::string names;
  for (std::size_t c = 2; c < 20; ++c) names += " " + header[c];
  Dir out;
  REQUIRE(run("features --seed 7 --samples 100 --replications 1 --features" + names + " -o " + (out / "s.csv")) == 0);
  const auto rows = read_csv(out / "s.csv");
  REQUIRE(rows.size() == 121);
  CHECK(rows[0].size() == 20);
  // same columns as the full run
  const auto full = read_csv(d / "f.csv");
  CHECK(rows[5][10] == full[5][10]);
}

TEST_CASE("config file and command-line overrides") {
  Dir d;
  std::ofstream(d / "c.json") << R"({"suite": {"functions": [1, 2], "instances": [1, 2, 3, 4, 5], "dimension": 3},
                                    "sample_count": 100, "replications": 1})";
  REQUIRE(run("features --seed 2 --config " + (d / "c.json") + " -o " + (d / "a.csv")) == 0);
  auto rows = read_csv(d / "a.csv");
  CHECK(rows.size() == 11);
  REQUIRE(run("features --seed 2 --config " + (d / "c.json") + " --functions 3 -o " + (d / "b.csv")) == 0);
  rows = read_csv(d / "b.csv");
  REQUIRE(rows.size() == 6);
  CHECK(rows[1][0] == "3");
  CHECK(read_json(d / "b.provenance.json")["suite"]["dimension"] == 3);

  std::ofstream(d / "bad.json") << R"({"samples": 10})";
  CHECK(run("features --seed 2 --config " + (d / "bad.json") + " -o " + (d / "x.csv")) == 1);
  std::ofstream(d / "seed.json") << R"({"seed": 10})";
  CHECK(run("features --seed 2 --config " + (d / "seed.json") + " -o " + (d / "x.csv")) == 1);
  std::ofstream(d / "type.json") << R"({"sample_count": "many"})";
  CHECK(run("features --seed 2 --config " + (d / "type.json") + " -o " + (d / "x.csv")) == 1);
  std::ofstream(d / "broken.json") << "{";
  CHECK(run("features --seed 2 --config " + (d / "broken.json") + " -o " + (d / "x.csv")) == 1);
}

TEST_CASE("embed at full rank and at rank 19") {
  const Dir& s = smoke();
  Dir d;
  REQUIRE(run("embed -i " + (s / "f.csv") + " --model " + (d / "m.json") + " --fingerprints " + (d / "fp.csv")) == 0);
  auto rows = read_csv(d / "fp.csv");
  REQUIRE(rows.size() == 121);
  CHECK(rows[0].size() == 40);
  CHECK(rows[0][2] == "sv1");
  CHECK(rows[0][39] == "sv38");
  const json model = read_json(d / "m.json");
  CHECK(model["singular_values"].size() == 38);

  REQUIRE(run("embed -i " + (s / "f.csv") + " --model " + (d / "m2.json") + " --fingerprints " + (d / "fp2.csv")) == 0);
  CHECK(slurp(d / "m.json") == slurp(d / "m2.json"));
  CHECK(slurp(d / "fp.csv") == slurp(d / "fp2.csv"));

  REQUIRE(run("embed -i " + (s / "f.csv") + " --rank 19 --normalization minmax --model " + (d / "m19.json") +
              " --fingerprints " + (d / "fp19.csv")) == 0);
  rows = read_csv(d / "fp19.csv");
  CHECK(rows[0].size() == 21);
  CHECK(read_json(d / "m19.json")["normalization"] == "minmax");

  CHECK(run("embed -i " + (s / "f.csv") + " --rank 39 --model " + (d / "x.json") + " --fingerprints " + (d / "x.csv")) != 0);
  CHECK(run("embed -i " + (d / "missing.csv") + " --model " + (d / "x.json") + " --fingerprints " + (d / "x.csv")) == 2);
  CHECK(run("embed -i " + (s / "f.csv") + " --normalization zscore --model " + (d / "x.json") + " --fingerprints " +
            (d / "x.csv")) == 1);
}

TEST_CASE("correlate instances and features") {
  const Dir& s = smoke();
  Dir d;
  REQUIRE(run("embed -i " + (s / "f.csv") + " --model " + (d / "m.json") + " --fingerprints " + (d / "fp.csv")) == 0);
  REQUIRE(run("correlate -i " + (d / "fp.csv") + " --csv " + (d / "c.csv") + " --svg " + (d / "c.svg") + " --report " +
              (d / "r.json")) == 0);
  auto rows = read_csv(d / "c.csv");
  REQUIRE(rows.size() == 121);
  CHECK(rows[0].size() == 121);
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0));
  CHECK(slurp(d / "c.svg").find("<svg") != std::string::npos);
  CHECK(read_json(d / "r.json")["problems"].size() == 24);

  REQUIRE(run("correlate --mode features -i " + (s / "f.csv") + " --csv " + (d / "fc.csv") + " --svg " + (d / "fc.svg")) == 0);
  rows = read_csv(d / "fc.csv");
  REQUIRE(rows.size() == 39);
  CHECK(rows[0].size() == 39);

  const std::string first = slurp(d / "fc.svg");
  REQUIRE(run("correlate --mode features -i " + (s / "f.csv") + " --csv " + (d / "fc.csv") + " --svg " + (d / "fc.svg")) == 0);
  CHECK(slurp(d / "fc.svg") == first);

  CHECK(run("correlate --mode pairs -i " + (s / "f.csv")) == 1);
  CHECK(run("correlate -i " + (d / "fp.csv") + " --threshold 1.5 --report " + (d / "r.json")) == 1);
}

TEST_CASE("sensitivity sweep") {
  const Dir& s = smoke();
  Dir d;
  REQUIRE(run("sensitivity -i " + (s / "f.csv") + " --table " + (d / "t.csv") + " --svg " + (d / "t.svg") + " --summary " +
              (d / "s.json")) == 0);
  const auto rows = read_csv(d / "t.csv");
  REQUIRE(rows.size() == 34);
  CHECK(rows[0] == std::vector<std::string>{"rank", "frobenius_error", "tail_singular_norm"});
  CHECK(rows[1][0] == "6");
  CHECK(rows[33][0] == "38");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double err = std::stod(rows[r][1]), tail = std::stod(rows[r][2]);
    CHECK(std::abs(err - tail) <= 1e-9);
    if (r > 1) CHECK(err <= std::stod(rows[r - 1][1]));
  }
  const json summary = read_json(d / "s.json");
  CHECK(summary["singular_values"].size() == 38);
  CHECK(summary["scree_estimate"].get<int>() >= 1);
  CHECK(slurp(d / "t.svg").find("<polyline") != std::string::npos);

  REQUIRE(run("sensitivity -i " + (s / "f.csv") + " --r-min 10 --r-max 10 --table " + (d / "one.csv") + " --svg " +
              (d / "one.svg")) == 0);
  CHECK(read_csv(d / "one.csv").size() == 2);
  CHECK(run("sensitivity -i " + (s / "f.csv") + " --r-min 12 --r-max 10 --table " + (d / "x.csv")) == 1);
  CHECK(run("sensitivity -i " + (s / "f.csv") + " --r-max 40 --table " + (d / "x.csv")) == 1);
}

TEST_CASE("project external rows") {
  const Dir& s = smoke();
  Dir d;
  REQUIRE(run("embed -i " + (s / "f.csv") + " --model " + (d / "m.json") + " --fingerprints " + (d / "fp.csv")) == 0);
  REQUIRE(run("features --seed 7 --functions 25,26 --instances 1 --samples 100 --replications 1 -o " + (d / "ext.csv")) == 0);
  REQUIRE(run("project --model " + (d / "m.json") + " -i " + (d / "ext.csv") + " --fingerprints " + (d / "efp.csv") +
              " --csv " + (d / "pc.csv") + " --svg " + (d / "pc.svg")) == 0);
  auto rows = read_csv(d / "pc.csv");
  REQUIRE(rows.size() == 123);
  CHECK(rows[0].size() == 123);
  CHECK(read_csv(d / "efp.csv").size() == 3);

  // projecting the training rows: each row correlates 1 with its own fingerprint
  REQUIRE(run("project --model " + (d / "m.json") + " -i " + (s / "f.csv") + " --fingerprints " + (d / "self.csv") +
              " --csv " + (d / "sc.csv") + " --svg " + (d / "sc.svg")) == 0);
  rows = read_csv(d / "sc.csv");
  REQUIRE(rows.size() == 241);
  for (std::size_t i = 1; i <= 120; ++i) CHECK(std::stod(rows[i][i + 120]) == doctest::Approx(1.0).epsilon(1e-6));

  // rename one column: mapping error without a mapping, success with one
  std::string text = slurp(d / "ext.csv");
  const std::string name = read_csv(d / "ext.csv")[0][5];
  text.replace(text.find(name), name.size(), "external_name");
  std::ofstream(d / "renamed.csv") << text;
  CHECK(run("project --model " + (d / "m.json") + " -i " + (d / "renamed.csv") + " --csv " + (d / "x.csv") + " --svg " +
            (d / "x.svg") + " --fingerprints " + (d / "x_fp.csv")) == 2);
  std::ofstream(d / "map.json") << json{{"external_name", name}}.dump();
  CHECK(run("project --model " + (d / "m.json") + " -i " + (d / "renamed.csv") + " --mapping " + (d / "map.json") +
            " --csv " + (d / "x.csv") + " --svg " + (d / "x.svg") + " --fingerprints " + (d / "x_fp.csv")) == 0);
  CHECK(slurp(d / "x_fp.csv") == slurp(d / "efp.csv"));
}

TEST_CASE("classify") {
  const Dir& s = smoke();
  Dir d;
  REQUIRE(run("classify -i " + (s / "f.csv") + " --ranks 19,27,30,38 --report " + (d / "cv.json") + " --svg " +
              (d / "cv.svg")) == 0);
  json doc = read_json(d / "cv.json");
  REQUIRE(doc["reports"].size() == 4);
  CHECK(doc["reports"][0]["config"]["rank"] == 19);
  CHECK(doc["reports"][3]["config"]["rank"] == 38);
  for (const auto& r : doc["reports"]) {
    CHECK(r["folds"].size() == 5);
    CHECK(r["config"]["classifier"]["k"] == 4);
  }
  CHECK(slurp(d / "cv.svg").find("<polyline") != std::string::npos);

  const std::string first = slurp(d / "cv.json");
  REQUIRE(run("classify -i " + (s / "f.csv") + " --ranks 19,27,30,38 --report " + (d / "cv.json") + " --svg " +
              (d / "cv.svg")) == 0);
  CHECK(slurp(d / "cv.json") == first);

  REQUIRE(run("classify -i " + (s / "f.csv") + " --space original --report " + (d / "o.json") + " --svg " + (d / "o.svg") +
              " --export-folds " + (d / "folds")) == 0);
  doc = read_json(d / "o.json");
  REQUIRE(doc["reports"].size() == 1);
  CHECK(doc["reports"][0]["config"]["space"] == "original");
  CHECK(doc["reports"][0]["config"]["normalization"] == "none");
  CHECK(read_csv(d / "folds/fold_1_train.csv").size() == 97);
  CHECK(read_csv(d / "folds/fold_1_test.csv").size() == 25);

  CHECK(run("classify -i " + (s / "f.csv") + " --classifier svm") == 1);
  CHECK(run("classify -i " + (s / "f.csv") + " --space latent") == 1);
  CHECK(run("classify -i " + (s / "f.csv") + " --classifier sgd --learning-rate 0 --report " + (d / "x.json")) == 1);
  CHECK(run("classify -i " + (s / "f.csv") + " --ranks 39 --report " + (d / "x.json")) == 1);
}

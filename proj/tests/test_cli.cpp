#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpq/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mpq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = mpq::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(nlohmann::json::parse(line));
  }
  return lines;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("build") {
  const Result anti = run({"build", "--group", "antipodal", "--dim", "3"});
  REQUIRE(anti.code == 0);
  const auto j = nlohmann::json::parse(anti.out);
  REQUIRE(j["terms"].size() == 1);
  CHECK(j["terms"][0]["mass"] == 0.5);
  CHECK(j["terms"][0]["center"] == nlohmann::json::array({0, 0, 0}));
  CHECK(anti.out.find("\"terms\":[{\"mass\":0.5,\"center\":[0,0,0]}]") != std::string::npos);

  const Result flat = run({"build", "--group", "trivial", "--dim", "3"});
  REQUIRE(flat.code == 0);
  CHECK(nlohmann::json::parse(flat.out)["terms"].empty());

  const Result lens = run({"build", "--group", "lens", "--params", "4,1,1"});
  REQUIRE(lens.code == 0);
  const auto lj = nlohmann::json::parse(lens.out);
  CHECK(lj["n"] == 3);
  CHECK(lj["terms"].size() == 3);
  CHECK(lj["total_mass"].get<double>() == doctest::Approx(0.5 + std::sqrt(2.0)).epsilon(1e-15));

  // Field order is fixed.
  const auto n = anti.out.find("\"n\"");
  const auto chart = anti.out.find("\"chart\"");
  const auto terms = anti.out.find("\"terms\"");
  const auto total = anti.out.find("\"total_mass\"");
  CHECK(n < chart);
  CHECK(chart < terms);
  CHECK(terms < total);
}

TEST_CASE("validation errors exit with 2 and name the error") {
  struct Case {
    std::vector<std::string> args;
    const char* name;
  };
  const std::vector<Case> cases{
      {{"build", "--group", "lens", "--params", "4,2,1"}, "BadParameters"},
      {{"build", "--group", "antipodal", "--dim", "2"}, "DimensionTooSmall"},
      {{"build", "--group", "{\"family\":\"generators\",\"max_order\":1000,"
                            "\"generators\":[[0.5403023058681398,-0.8414709848078965,0,"
                            "0.8414709848078965,0.5403023058681398,0,0,0,1]]}"},
       "OrderExceeded"},
      {{"build", "--group", "{\"family\":\"generators\",\"generators\":[[-1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]]}",
        "--base", "0,0,0,1"},
       "SingularBasePoint"},
      {{"build", "--group", "dihedral"}, "BadParameters"},
      {{"build", "--group", "antipodal", "--base", "0.5,0,0,0"}, "InvalidPoint"},
      {{"verify", "--group", "lens", "--params", "4,2,1"}, "BadParameters"},
      {{"sample", "--group", "antipodal", "--grid-steps", "1"}, "BadParameters"},
      {{"sample", "--group", "antipodal", "--grid-min", "1", "--grid-max", "0"}, "BadParameters"},
      {{"verify", "--group", "antipodal", "--check", "curvature"}, "BadParameters"},
  };
  for (const auto& c : cases) {
    const Result r = run(c.args);
    INFO(c.args[2]);
    CHECK(r.code == 2);
    CHECK(r.err.rfind(c.name, 0) == 0);
  }
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"build", "--format", "xml"}).code == 2);
}

TEST_CASE("base point handling") {
  const Result slightly_off = run({"build", "--group", "antipodal", "--base", "0,0,0,1.0000001"});
  CHECK(slightly_off.code == 0);
  CHECK(slightly_off.err.find("warning") != std::string::npos);
  const Result exact = run({"build", "--group", "antipodal", "--base", "0,0,0,1"});
  CHECK(exact.code == 0);
  CHECK(exact.err.empty());
  CHECK(run({"build", "--group", "antipodal", "--base", "default"}).code == 0);
}

TEST_CASE("verify") {
  const Result anti = run({"verify", "--group", "antipodal", "--dim", "3", "--samples", "300"});
  CHECK(anti.code == 0);
  const auto reports = json_lines(anti.out);
  REQUIRE(reports.size() == 4);
  const char* names[] = {"pullback", "harmonic", "deck_isometry", "mass_limit"};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(reports[i]["check"] == names[i]);
    CHECK(reports[i]["pass"] == true);
    // Required keys first, in this order.
    auto it = reports[i].begin();
    CHECK(it.key() == "check");
  }

  const Result flat = run({"verify", "--group", "trivial", "--samples", "100"});
  CHECK(flat.code == 0);
  const auto fr = json_lines(flat.out);
  REQUIRE(fr.size() == 4);
  CHECK(fr[2]["check"] == "deck_isometry");
  CHECK(fr[2]["skipped"] == true);

  const Result subset = run({"verify", "--group", "lens", "--params", "3,1,1", "--check",
                             "pullback,mass", "--format", "csv"});
  CHECK(subset.code == 0);
  const auto rows = csv_rows(subset.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == "check");
  CHECK(rows[1][0] == "pullback");
  CHECK(rows[2][0] == "mass_limit");
}

TEST_CASE("identical config and seed give byte-identical output") {
  const std::vector<std::string> args{"verify", "--group", "lens", "--params", "7,1,2",
                                      "--samples", "200", "--seed", "7"};
  CHECK(run(args).out == run(args).out);
  CHECK(run({"build", "--group", "lens", "--params", "7,1,2"}).out ==
        run({"build", "--group", "lens", "--params", "7,1,2"}).out);
  auto other = args;
  other.back() = "8";
  CHECK(run(args).out != run(other).out);
}

TEST_CASE("sample") {
  const Result r = run({"sample", "--group", "antipodal", "--grid-min", "-0.5", "--grid-max", "0.5",
                        "--grid-steps", "3"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 1 + 27);
  CHECK(rows[0] == std::vector<std::string>{"x1", "x2", "x3", "u", "metric_scale", "excluded"});
  bool saw_half = false, saw_center = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    REQUIRE(row.size() == 6);
    if (row[0] == "0.5" && row[1] == "0" && row[2] == "0") {
      saw_half = true;
      CHECK(std::stod(row[3]) == 2.0);
      CHECK(std::stod(row[4]) == doctest::Approx(16.0));
      CHECK(row[5] == "0");
    }
    if (row[0] == "0" && row[1] == "0" && row[2] == "0") {
      saw_center = true;
      CHECK(row[3].empty());
      CHECK(row[4].empty());
      CHECK(row[5] == "1");
    }
  }
  CHECK(saw_half);
  CHECK(saw_center);

  const Result flat = run({"sample", "--group", "trivial", "--grid-steps", "4"});
  REQUIRE(flat.code == 0);
  const auto frows = csv_rows(flat.out);
  CHECK(frows.size() == 1 + 64);
  for (std::size_t i = 1; i < frows.size(); ++i) CHECK(frows[i][3] == "1");

  const Result js = run({"sample", "--group", "antipodal", "--grid-steps", "2", "--format", "json"});
  REQUIRE(js.code == 0);
  CHECK(json_lines(js.out).size() == 8);
}

TEST_CASE("mass") {
  const Result r = run({"mass", "--group", "lens", "--params", "4,1,1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["order"] == 4);
  CHECK(j["total_mass"].get<double>() == doctest::Approx(0.5 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(j["total_mass"].get<double>() >= j["lower_bound"].get<double>());
  CHECK(run({"mass", "--group", "antipodal", "--dim", "5", "--format", "csv"}).out ==
        "element,mass\n1,0.125\ntotal,0.125\n");
}

TEST_CASE("group spec from a file and --out") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto spec = dir / "mpq_test_group.json";
  const auto out = dir / "mpq_test_out.json";
  std::ofstream(spec) << R"({"family": "product", "factors": [{"family": "antipodal", "dim": 1},
                                                          {"family": "lens", "params": [3, 1]}]})";
  const Result r = run({"build", "--group", spec.string(), "--base", "0.6,0,0.8,0", "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["n"] == 3);
  CHECK(j["terms"].size() == 5);
  std::filesystem::remove(spec);
  std::filesystem::remove(out);
}

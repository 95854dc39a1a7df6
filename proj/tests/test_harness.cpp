// Copyright 2026 The recordlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "recordlab/error.hpp"
#include "recordlab/harness.hpp"

using recordlab::ErrorCode;
using recordlab::Report;
using recordlab::SimConfig;
using recordlab::Subcommand;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const recordlab::Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

// Minimal RFC-4180 record splitter used as the parsing oracle.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out(1);
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.back().push_back(field);
      field.clear();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      out.back().push_back(field);
      field.clear();
      out.emplace_back();
      ++i;
    } else {
      field += c;
    }
  }
  if (out.back().empty()) out.pop_back();
  return out;
}

SimConfig small_simulate() {
  SimConfig c;
  c.set("n", "2000");
  c.set("trials", "300");
  return c;
}

}  // namespace

TEST_CASE("subcommand names round-trip") {
  for (const auto& name : recordlab::subcommand_names()) {
    const auto cmd = recordlab::parse_subcommand(name);
    REQUIRE(cmd.has_value());
    CHECK(recordlab::subcommand_name(*cmd) == name);
  }
  CHECK(recordlab::subcommand_names().size() == 7);
  CHECK_FALSE(recordlab::parse_subcommand("frobnicate").has_value());
}

TEST_CASE("config keys and errors") {
  SimConfig c;
  c.set("d", "3");
  c.set("n", "1e4, 1e6");
  c.set("a", "-a_n,0,0.25,+a_n");
  c.set("trials", "100");
  c.set("seed", "18446744073709551615");
  c.set("omega", "sqrt");
  c.set("workers", "4");
  c.set("out", "/tmp/x y");
  c.set("sampler", "direct");
  c.set("raw", "true");
  c.set("budget", "1e8");
  CHECK(c.d == 3);
  CHECK(c.n_grid == std::vector<double>{1e4, 1e6});
  REQUIRE(c.a_grid.size() == 4);
  CHECK(c.a_grid[0].resolve(1e6, 3) == doctest::Approx(-recordlab::a_n_of(1e6, 3)));
  CHECK(c.a_grid[2].resolve(1e6, 3) == 0.25);
  CHECK(c.a_grid[3].text() == "a_n");
  CHECK(c.a_grid[0].text() == "-a_n");
  CHECK(c.seed == 18446744073709551615ull);
  CHECK(c.workers == 4);
  CHECK(c.output_dir == "/tmp/x y");
  CHECK(c.raw);
  CHECK(c.budget == 1e8);
  c.set("a", "auto");
  CHECK(c.a_grid.empty());

  for (auto [k, v] : {std::pair{"d", "1"}, std::pair{"d", "x"}, std::pair{"n", ""},
                      std::pair{"trials", "0"}, std::pair{"seed", "-3"}, std::pair{"omega", "huge"},
                      std::pair{"workers", "0"}, std::pair{"sampler", "magic"},
                      std::pair{"colour", "red"}, std::pair{"a", "a_n+"}, std::pair{"raw", "maybe"}}) {
    CHECK_MESSAGE(code_of([&] { SimConfig().set(k, v); }) == ErrorCode::kUsage, k, "=", v);
  }
}

TEST_CASE("config file and environment") {
  const auto path = std::filesystem::temp_directory_path() / "recordlab_test.conf";
  {
    std::ofstream f(path);
    f << "# sample\n d = 3 \nn=1e5\n\nseed=7  # trailing\n";
  }
  SimConfig c;
  c.load_file(path.string());
  CHECK(c.d == 3);
  CHECK(c.n_grid == std::vector<double>{1e5});
  CHECK(c.seed == 7);
  {
    std::ofstream f(path);
    f << "d 3\n";
  }
  CHECK(code_of([&] { SimConfig().load_file(path.string()); }) == ErrorCode::kUsage);
  std::filesystem::remove(path);
  CHECK(code_of([&] { SimConfig().load_file("/nonexistent/recordlab.conf"); }) == ErrorCode::kIo);

  ::setenv("RECORDLAB_SEED", "99", 1);
  c.apply_environment();
  CHECK(c.seed == 99);
  ::setenv("RECORDLAB_SEED", "oops", 1);
  CHECK(code_of([&] { c.apply_environment(); }) == ErrorCode::kUsage);
  ::unsetenv("RECORDLAB_SEED");
  c.apply_environment();
  CHECK(c.seed == 99);
}

TEST_CASE("real formatting") {
  CHECK(recordlab::format_real(0.1) == "0.10000000000000001");
  CHECK(recordlab::format_real(1.0 / 3.0) == "0.33333333333333331");
  CHECK(recordlab::format_real(1e100) == "1e+100");
  CHECK(recordlab::format_real(-2.5) == "-2.5");
  CHECK(recordlab::format_real(0.0) == "0");
  CHECK(recordlab::format_real(NAN) == "nan");
  CHECK(recordlab::format_real(INFINITY) == "inf");
  CHECK(recordlab::format_real(-INFINITY) == "-inf");
  for (double v : {M_PI, 1e-300, 123456789.123, 6.02214076e23}) {
    CHECK(std::stod(recordlab::format_real(v)) == v);
  }
}

TEST_CASE("csv layout, quoting and json mirror") {
  Report r;
  r.command = Subcommand::kSimulate;
  recordlab::ReportRow row;
  row.experiment = "simulate";
  row.n = 100;
  row.d = 2;
  row.statistic = "a \"quoted\", value";
  row.value = 0.5;
  row.rule = "x<=y\nz";
  row.verdict = recordlab::Verdict::kFail;
  row.trials = 12;
  r.rows.push_back(row);
  row.statistic = "plain";
  row.value = NAN;
  row.verdict = recordlab::Verdict::kReport;
  r.rows.push_back(row);

  const auto csv = recordlab::to_csv(r);
  CHECK(csv.rfind("experiment,n,d,a,statistic,value,se_or_band,bound_or_target,rule,pass,trials\r\n", 0) == 0);
  const auto recs = parse_csv(csv);
  REQUIRE(recs.size() == 3);
  CHECK(recs[1][4] == "a \"quoted\", value");
  CHECK(recs[1][8] == "x<=y\nz");
  CHECK(recs[1][9] == "fail");
  CHECK(recs[1][10] == "12");
  CHECK(recs[2][5] == "nan");
  CHECK(recs[2][9] == "report");
  CHECK_FALSE(r.passed());

  const auto j = nlohmann::json::parse(recordlab::to_json(r));
  CHECK(j["command"] == "simulate");
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["statistic"] == "a \"quoted\", value");
  CHECK(j["rows"][0]["value"] == 0.5);
  CHECK(j["rows"][1]["value"].is_null());
  CHECK(j["rows"][0]["pass"] == "fail");

  recordlab::RawTable raw{{"trial", "phi"}, {{"0", "1.5"}, {"1", "x,y"}}};
  const auto rc = parse_csv(recordlab::raw_to_csv(raw));
  REQUIRE(rc.size() == 3);
  CHECK(rc[2][1] == "x,y");
}

TEST_CASE("simulate is deterministic across worker counts") {
  auto c = small_simulate();
  c.raw = true;
  c.workers = 1;
  const auto one = recordlab::run(Subcommand::kSimulate, c);
  c.workers = 8;
  const auto eight = recordlab::run(Subcommand::kSimulate, c);
  CHECK(recordlab::to_csv(one) == recordlab::to_csv(eight));
  CHECK(recordlab::raw_to_csv(one.raw) == recordlab::raw_to_csv(eight.raw));
  CHECK(one.raw.rows.size() == 300);
  CHECK(one.passed());
  c.seed = 43;
  CHECK(recordlab::to_csv(recordlab::run(Subcommand::kSimulate, c)) != recordlab::to_csv(one));
}

TEST_CASE("mean-check and bounds-table rows") {
  SimConfig c;
  c.set("n", "1e4");
  c.set("trials", "2000");
  c.workers = 4;
  const auto m = recordlab::run(Subcommand::kMeanCheck, c);
  CHECK_FALSE(m.rows.empty());
  for (std::size_t i = 1; i < m.rows.size(); ++i) {
    CHECK(m.rows[i - 1].a <= m.rows[i].a);
  }
  const auto b = recordlab::run(Subcommand::kBoundsTable, SimConfig{});
  bool big = false;
  for (const auto& row : b.rows) {
    if (row.n == 1e100) {
      big = true;
      if (row.statistic == "p_n" || row.statistic == "lambda") CHECK(std::isfinite(row.value));
    }
    CHECK(row.experiment == "bounds-table");
  }
  CHECK(big);
  CHECK(b.passed());
}

TEST_CASE("budget caps the trial count") {
  auto c = small_simulate();
  c.set("budget", "20000");
  c.set("sampler", "direct");
  const auto r = recordlab::run(Subcommand::kSimulate, c);
  for (const auto& row : r.rows) CHECK(row.trials == 10);
}

TEST_CASE("inadmissible grids are domain errors") {
  SimConfig c;
  c.set("n", "8");
  c.set("trials", "10");
  CHECK(code_of([&] { recordlab::run(Subcommand::kMeanCheck, c); }) == ErrorCode::kDomain);
  SimConfig a;
  a.set("n", "1e4");
  a.set("a", "5");
  a.set("trials", "10");
  CHECK(code_of([&] { recordlab::run(Subcommand::kMeanCheck, a); }) == ErrorCode::kDomain);
}

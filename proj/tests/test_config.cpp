#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "roadfield/config.hpp"
#include "roadfield/runcmd.hpp"

using namespace roadfield;

namespace {

const char* kSample = R"ini(
# sample configuration
[road]
D = 2.0
c = 0.5
mu1 = 1.5
nu2 = 0.75

[field1]
d = 1.25
a_expr = "1 - 0.1*(x^2 + y^2)"
a_bound = 50

[grid]
R = 4
h = 0.5
shape = rectangle

[solver]
tol = 1e-9
drift_scheme = upwind

[study]
seed = 99
radii = 4, 8, 12

[output]
format = csv
)ini";

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig cfg = parse_config_text(kSample);
  CHECK(cfg.D == 2.0);
  CHECK(cfg.c == 0.5);
  CHECK(cfg.mu1 == 1.5);
  CHECK(cfg.mu2 == 1.0);  // default
  CHECK(cfg.nu2 == 0.75);
  CHECK(cfg.field1.d == 1.25);
  CHECK(cfg.field1.a_expr == "1 - 0.1*(x^2 + y^2)");
  CHECK(cfg.field1.a_bound == 50.0);
  CHECK(cfg.R == 4.0);
  CHECK(cfg.shape == "rectangle");
  CHECK(cfg.tol == 1e-9);
  CHECK(cfg.drift_scheme == "upwind");
  CHECK(cfg.seed == 99);
  CHECK(cfg.radii == std::vector<double>{4.0, 8.0, 12.0});
  CHECK(cfg.format == "csv");
  cfg.validate();
}

TEST_CASE("config errors carry key paths") {
  CHECK_THROWS_AS(parse_config_text("[road]\nbogus = 1\n"), ConfigError);
  try {
    parse_config_text("[road]\nD = fast\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key == "road.D");
  }
  CHECK_THROWS_AS(parse_config_text("D = 1\n"), ConfigError);  // no section
  RunConfig cfg;
  cfg.set("road.D", "-1");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  // malformed expressions surface as ParseError with a byte offset
  RunConfig bad_expr;
  bad_expr.set("field1.a_expr", "1 + foo(2)");
  CHECK_THROWS_AS(bad_expr.validate(), ParseError);
}

TEST_CASE("overrides apply after the file") {
  const std::string path = "/tmp/rf_test_config.ini";
  {
    std::ofstream f(path);
    f << kSample;
  }
  const RunConfig cfg = load_config(path, {"grid.R=8", "road.D=3.5"});
  CHECK(cfg.R == 8.0);
  CHECK(cfg.D == 3.5);
  CHECK(cfg.c == 0.5);  // from the file
  std::remove(path.c_str());
}

TEST_CASE("echo fidelity: re-applying the echo reproduces the configuration") {
  const RunConfig cfg = parse_config_text(kSample);
  const nlohmann::json echo = config_echo(cfg);
  RunConfig replay;
  for (const auto& [section, keys] : echo.items()) {
    for (const auto& [key, value] : keys.items()) {
      std::string text;
      if (value.is_string())
        text = value.get<std::string>();
      else if (value.is_boolean())
        text = value.get<bool>() ? "true" : "false";
      else if (value.is_array()) {
        for (const auto& item : value) {
          if (!text.empty()) text += ",";
          text += nlohmann::json(item).dump();
        }
        if (text.empty()) continue;  // empty list = keep default
      } else {
        text = value.dump();
      }
      replay.set(section + "." + key, text);
    }
  }
  CHECK(config_echo(replay) == echo);
}

TEST_CASE("problem params reflect the config") {
  const RunConfig cfg = parse_config_text(kSample);
  const ProblemParams p = cfg.problem_params();
  CHECK(p.D == 2.0);
  CHECK(p.mu[0] == 1.5);
  CHECK(p.nu[1] == 0.75);
  CHECK(p.side[0].a.value(0.0, 0.0) == doctest::Approx(1.0));
  CHECK_FALSE(p.f.has_value());
}

TEST_CASE("run_command produces the fixed document schema") {
  RunConfig cfg;
  cfg.set("grid.R", "2");
  cfg.set("grid.h", "0.5");
  cfg.validate();
  const RunOutcome out = run_command("eig", cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.document["schema_version"] == 1);
  CHECK(out.document["command"] == "eig");
  CHECK(out.document.contains("config_echo"));
  CHECK(out.document.contains("timings_ms"));
  CHECK(out.document["tool_version"] == kToolVersion);
  const auto& res = out.document["results"];
  for (const char* key :
       {"lambda", "residual", "iterations", "positivity_margin", "N"})
    CHECK(res.contains(key));
  CHECK(res["N"].get<int>() == 45);  // road 7 + 2 x 19 field unknowns
  CHECK(res["lambda"].is_number());
  CHECK(std::isfinite(res["lambda"].get<double>()));
}

TEST_CASE("run_command error paths set exit codes and emit JSON") {
  // malformed expression: parse error with the byte offset reported
  {
    RunConfig cfg;
    cfg.field1.a_expr = "1 + * 2";
    const RunOutcome out = run_command("eig", cfg);
    CHECK(out.exit_code == 1);
    REQUIRE(out.document.contains("error"));
    CHECK(out.document["error"]["kind"] == "parse");
    CHECK(out.document["error"].contains("offset"));
    CHECK(out.document["schema_version"] == 1);
  }
  // unknown command
  {
    const RunOutcome out = run_command("frobnicate", RunConfig{});
    CHECK(out.exit_code == 1);
  }
  // invariant failure: decay on a constant-potential config refuses the
  // envelope precondition -> numerical error, exit 1
  {
    RunConfig cfg;
    cfg.set("field1.a_expr", "0.5");
    cfg.set("field2.a_expr", "0.5");
    cfg.set("grid.R", "6");
    cfg.set("grid.h", "0.5");
    cfg.set("study.radii", "3, 6");
    const RunOutcome out = run_command("decay", cfg);
    CHECK(out.exit_code == 1);
    CHECK(out.document["error"]["kind"] == "numerical");
  }
}

TEST_CASE("converge command emits the CSV projection") {
  RunConfig cfg;
  cfg.set("study.radii", "2, 4");
  cfg.set("grid.h", "0.5");
  cfg.set("output.format", "csv");
  const RunOutcome out = run_command("converge", cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.csv.rfind("index,parameter_or_radius,lambda,residual,iterations\n",
                      0) == 0);
  // one header plus one row per radius
  int lines = 0;
  for (char ch : out.csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 3);
}

TEST_CASE("eigenvector dump carries the grid sidecar") {
  RunConfig cfg;
  cfg.set("grid.R", "2");
  cfg.set("grid.h", "0.5");
  const RunOutcome out = run_command("eig", cfg, /*dump_eigenvector=*/true);
  CHECK(out.exit_code == 0);
  CHECK((int)out.eigenvector.size() == out.document["results"]["N"].get<int>());
  CHECK(out.dump_sidecar["R"] == 2.0);
  CHECK(out.dump_sidecar["shape"] == "halfdisk");
  CHECK(out.dump_sidecar.contains("ordering"));
}

TEST_CASE("identical config and seed give byte-identical results") {
  RunConfig cfg;
  cfg.set("grid.R", "4");
  cfg.set("grid.h", "0.5");
  cfg.set("study.harnack_draws", "2");
  cfg.set("study.harnack_r", "2");
  cfg.set("study.harnack_refine", "false");
  const RunOutcome a = run_command("harnack", cfg);
  const RunOutcome b = run_command("harnack", cfg);
  CHECK(a.exit_code == 0);
  CHECK(a.document["results"].dump() == b.document["results"].dump());
}

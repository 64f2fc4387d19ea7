#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "roadfield/runcmd.hpp"

using namespace roadfield;

int main(int argc, char** argv) {
  CLI::App app{"road-field principal eigenvalue laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_override;
  std::string dump_path;

  app.add_option("-c,--config", config_path, "config file path");
  app.add_option("-s,--set", overrides,
                 "override, e.g. --set grid.R=20 (applied after the file)");
  app.add_option("-o,--output", output_override, "output JSON path");
  app.add_option("--dump-eigenvector", dump_path,
                 "write the eigenvector (text, grid index order) plus a "
                 "sidecar <path>.meta.json describing the grid");

  const std::vector<std::string> commands = {"eig",    "bounds", "converge",
                                             "sweep",  "harnack", "decay",
                                             "evolve", "oracle"};
  for (const auto& c : commands) app.add_subcommand(c)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    cfg = load_config(config_path, overrides);
  } catch (const std::exception& e) {
    nlohmann::json err{{"kind", "config"}, {"message", e.what()}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
      err["kind"] = "parse";
      err["offset"] = pe->offset;
      err["expected"] = pe->expected;
    }
    nlohmann::json doc{{"schema_version", kSchemaVersion},
                       {"command", command},
                       {"results", nlohmann::json::object()},
                       {"tool_version", kToolVersion},
                       {"error", err}};
    std::cout << doc.dump(2) << std::endl;
    return 1;
  }
  if (!output_override.empty()) cfg.path = output_override;

  RunOutcome out = run_command(command, cfg, !dump_path.empty());

  const std::string text = out.document.dump(2);
  if (cfg.path.empty()) {
    std::cout << text << std::endl;
  } else {
    std::ofstream f(cfg.path);
    f << text << '\n';
    std::cout << text << std::endl;
  }
  if (cfg.format == "csv" && !out.csv.empty()) {
    const std::string csv_path =
        cfg.path.empty() ? command + ".csv" : cfg.path + ".csv";
    std::ofstream f(csv_path);
    f << out.csv;
  }
  if (!dump_path.empty() && !out.eigenvector.empty()) {
    std::ofstream f(dump_path);
    char buf[40];
    for (double v : out.eigenvector) {
      std::snprintf(buf, sizeof buf, "%.17g\n", v);
      f << buf;
    }
    std::ofstream meta(dump_path + ".meta.json");
    meta << out.dump_sidecar.dump(2) << '\n';
  }
  return out.exit_code;
}

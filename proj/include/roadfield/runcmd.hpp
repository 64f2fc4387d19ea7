#ifndef ROADFIELD_RUNCMD_HPP
#define ROADFIELD_RUNCMD_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "roadfield/config.hpp"

namespace roadfield {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Exit codes: 0 success, 1 configuration or numerical error, 2 a named
// invariant or assertion failed. The JSON document is always produced, with
// partial results and an error field on failure.
struct RunOutcome {
  int exit_code = 0;
  nlohmann::json document;
  std::string csv;                    // converge/sweep projection, may be empty
  std::vector<double> eigenvector;    // filled when dump_eigenvector is set
  nlohmann::json dump_sidecar;
};

nlohmann::json config_echo(const RunConfig& cfg);

// command: eig | bounds | converge | sweep | harnack | decay | evolve | oracle
RunOutcome run_command(const std::string& command, const RunConfig& cfg,
                       bool dump_eigenvector = false);

}  // namespace roadfield

#endif

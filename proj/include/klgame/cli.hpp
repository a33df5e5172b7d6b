#pragma once

#include <map>
#include <string>

namespace klgame {

struct CliResult {
  int exit_code;            // 0 = all assertions pass, 1 = a bound failed, 2 = usage/config
  std::string report_text;  // deterministic JSON report
};

// Runs one mode against a config document. Overrides replace top-level config
// fields ("horizon", "seed", "out", "oracle"). Never throws: configuration
// and usage failures come back as exit code 2 with a report.
CliResult run_cli_mode(const std::string& mode, const std::string& config_text,
                       const std::map<std::string, std::string>& overrides = {});

}  // namespace klgame

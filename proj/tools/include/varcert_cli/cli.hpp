#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "varcert_cli/config.hpp"

namespace varcert::cli {

/// Outcome of one command before it is written out.
struct CommandOutput {
  /// CERTIFIED_ON_SAMPLES, REFUTED, VACUOUS, or COMPUTED.
  std::string verdict = "COMPUTED";
  nlohmann::json body = nlohmann::json::object();
  /// Rows for --csv, first row is the header.
  std::vector<std::vector<std::string>> table;
};

/// Executes the command named in cfg.command.
CommandOutput execute(const RunConfig& cfg);

/// Exit code for a verdict: 1 for REFUTED, 0 otherwise.
int exit_code_for(const std::string& verdict);

/// Full report document: schema_version, command, config, verdict, the
/// command body, and timing.
nlohmann::json make_report(const RunConfig& cfg, const CommandOutput& out, double elapsed_seconds);

/// Report without the timing field, for reproducibility comparisons.
nlohmann::json strip_timing(nlohmann::json report);

/// Command-line entry point. Reports go to `out` unless --out is given;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace varcert::cli

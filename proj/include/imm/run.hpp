#pragma once

// Pipeline orchestration: analyze | residuals | variation | hopf | stability,
// producing one schema-versioned JSON report per run.

#include <string>

#include "imm/config.hpp"
#include "imm/errors.hpp"
#include "json.hpp"

namespace imm {

inline constexpr int schema_version = 1;
std::string tool_version();

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int not_certified = 2;
inline constexpr int inapplicable = 3;
inline constexpr int input = 4;
inline constexpr int internal = 5;
}  // namespace exit_code

int exit_code_for(ErrorKind kind);

struct RunOutcome {
  nlohmann::json report;
  int exit_code = exit_code::ok;
};

/// cfg must be finalized. Throws imm::Error for module failures.
RunOutcome run(const RunConfig& cfg);

/// The single structured error object emitted on failure.
nlohmann::json error_report(ErrorKind kind, const std::string& message);

/// Lossy tabular projection of a report's results.
std::string to_csv(const nlohmann::json& report);

/// Relative paths are resolved against IMMSTAB_OUTPUT_DIR when it is set.
std::string resolve_output_path(const std::string& path);

/// Serializes in cfg.format to cfg.output (stdout when empty).
void write_report(const RunConfig& cfg, const nlohmann::json& report);

}  // namespace imm

// commands.hpp - subcommands of the magnon tool and their CSV/JSON output
//
// Each command computes all of its tables in memory first; nothing is written
// unless the computation finished. Cells are formatted with shortest round-trip
// precision, so output is bit-reproducible.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "magnon/config.hpp"

namespace magnon {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_nonconvergence = 3, exit_io = 4 };

struct Table {
    std::string name;  ///< file stem
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    /// Extra header entries, echoed as '# key: value' lines and into the sidecar.
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

struct CommandResult {
    std::vector<Table> tables;
    bool converged{true};
};

/// Command names in CLI order.
const std::vector<std::string>& command_names();

/// Runs one command against an already validated config. Throws ConfigError,
/// std::invalid_argument (bad inputs found during computation) and StepTooLarge.
CommandResult run_command(const std::string& command, const RunConfig& config);

/// Writes <dir>/<name>.csv and <dir>/<name>.json for every table. Throws
/// std::filesystem::filesystem_error or std::ios_base::failure on I/O errors.
std::vector<std::filesystem::path> write_tables(const std::string& command, const RunConfig& config,
                                                const std::vector<Table>& tables);

/// Whole pipeline with exit-code mapping: validate, compute, write. Diagnostics go to `err`.
int execute(const std::string& command, RunConfig config, std::ostream& err);

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

}  // namespace magnon

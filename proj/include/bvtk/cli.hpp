#pragma once

// Command-line front end. Every subcommand takes a JSON object of arguments
// and produces a JSON object; exact values are printed as strings.

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace bvtk::cli {

using json = nlohmann::json;

enum ExitCode { kOk = 0, kPrecondition = 2, kInvariant = 3 };

const std::vector<std::string>& command_names();

/// Runs one command. Throws PreconditionError on bad arguments and
/// InvariantError when a result or a --verify recomputation is inconsistent.
json execute(const std::string& command, const json& args, bool verify = false);

/// {"error": {"kind": ..., "message": ...}}
json error_json(const std::string& kind, const std::string& message);

struct BatchResult {
  json output;  // {"exit_code", "first_error", "results": {id: ...}}
  int exit_code;
};

/// A batch is {"commands": [{"id", "command", "args"}, ...]} or the bare
/// list. Output does not depend on parallelism.
BatchResult run_batch(const json& batch, unsigned parallelism, bool verify = false);

/// Two-space indented, keys sorted.
std::string render(const json& j);

/// Comma-separated table of the rows of a fermat scan.
std::string scan_csv(const json& scan);

/// argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace bvtk::cli

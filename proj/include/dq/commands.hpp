#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dq/errors.hpp"
#include "dq/lifting.hpp"
#include "dq/session.hpp"

namespace CLI {
class App;
}

namespace dq {

inline constexpr int kReportSchema = 1;

enum ExitCode : int { kExitSuccess = 0, kExitError = 1, kExitObstruction = 2 };

struct CommandRequest {
  std::string name;
  std::vector<std::string> args;
  std::optional<int> order;
  std::optional<int> deg;
  std::optional<int> dord;
  std::optional<std::string> bounds;  // "deg=D,dord=R[,class=C]"
  std::string session_path;

  /// Canonical echo of the command line (no session path).
  std::string echo() const;
};

/// The commands understood by run_command, in help order.
const std::vector<std::string>& command_names();

/// Registers one subcommand per engine command on `app`; the chosen one fills `req`.
/// With `with_session`, each subcommand takes -s/--session FILE.
void add_command_subcommands(CLI::App& app, CommandRequest& req, bool with_session);

/// Parses a `run` directive line into a request.
CommandRequest parse_command_line(const std::string& line);

struct Report {
  std::string command;
  std::string status;  // success | trivial | obstruction | error
  int exit_code = kExitSuccess;
  nlohmann::ordered_json result = nlohmann::ordered_json::object();
  std::optional<std::string> error_code;
  std::optional<std::string> error_message;
  double elapsed_ms = 0;
};

/// Runs one command against a parsed session. Engine errors become error reports (exit 1).
Report run_command(const SessionFile& session, const CommandRequest& request);

/// JSON mirror of the report; timing only when asked, so default output is byte-stable.
std::string render_json(const Report& report, bool include_timing = false);
std::string render_text(const Report& report);

/// Report for a failure before any command ran (usage, file, or parse errors).
Report error_report(const std::string& command, const Error& e);

}  // namespace dq

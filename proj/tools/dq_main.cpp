// dq: command-line front end. One command per invocation; exit 0 success, 2 obstruction, 1 error.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dq/commands.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dq::Error(dq::ErrorCode::UsageError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const dq::Report& r, bool json, bool timing) {
  std::cout << (json ? dq::render_json(r, timing) : dq::render_text(r));
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic deformation quantization over the rationals"};
  app.require_subcommand(1);
  bool json = false, timing = false;
  app.add_flag("--json", json, "Print the JSON report");
  app.add_flag("--timing", timing, "Include timing in the JSON report");

  dq::CommandRequest req;
  dq::add_command_subcommands(app, req, true);

  std::string exec_path, check_path;
  CLI::App* exec = app.add_subcommand("exec", "Run the single `run` directive of a session file");
  exec->add_option("file", exec_path, "Session file")->required();
  CLI::App* check = app.add_subcommand("check", "Parse a session file and print its canonical form");
  check->add_option("file", check_path, "Session file")->required();
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return dq::kExitError;
  }

  if (exec->parsed()) {
    dq::Report r;
    try {
      const dq::SessionFile s = dq::parse_session(read_file(exec_path));
      if (s.directives.size() != 1)
        throw dq::Error(dq::ErrorCode::UsageError, "exec needs exactly one run directive, found " + std::to_string(s.directives.size()));
      r = dq::run_command(s, dq::parse_command_line(s.directives.front()));
    } catch (const dq::Error& e) {
      r = dq::error_report("exec", e);
    }
    return emit(r, json, timing);
  }

  if (check->parsed()) {
    dq::Report r;
    r.command = "check";
    r.status = "success";
    try {
      const dq::SessionFile s = dq::parse_session(read_file(check_path));
      const std::string canonical = dq::serialize_session(s);
      const bool round_trip = dq::same_definitions(s, dq::parse_session(canonical));
      r.result["definitions"] = s.definitions.size();
      r.result["directives"] = s.directives;
      r.result["round_trip"] = round_trip;
      r.result["canonical"] = canonical;
      if (!round_trip) throw dq::Error(dq::ErrorCode::IntegrityFailure, "canonical form does not parse back to the same session");
      if (!json) {
        std::cout << canonical;
        return dq::kExitSuccess;
      }
    } catch (const dq::Error& e) {
      r = dq::error_report("check", e);
    }
    return emit(r, json, timing);
  }

  dq::Report r;
  try {
    const dq::SessionFile s = dq::parse_session(read_file(req.session_path));
    r = dq::run_command(s, req);
  } catch (const dq::Error& e) {
    r = dq::error_report(req.echo(), e);
  }
  return emit(r, json, timing);
}

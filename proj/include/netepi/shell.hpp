#pragma once

#include "netepi/session.hpp"

#include <iosfwd>
#include <string_view>

namespace netepi {

/// Text for the `help` command.
std::string_view shell_help();

/// Executes one shell command line against `session`, printing its result or
/// a one-line error to `out`. Returns false once the command is `quit`.
bool execute_command(Session& session, std::string_view line, std::ostream& out);

/// Reads commands from `in` until `quit` or end of input. Returns the exit
/// code (always 0; bad commands are reported and skipped).
int run_shell(Session& session, std::istream& in, std::ostream& out, bool interactive);

} // namespace netepi

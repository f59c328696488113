#pragma once

// Subcommand dispatch for the pintersect tool.

#include <iosfwd>
#include <map>
#include <string>

namespace pintersect::cli {

/// Exit codes: 0 success, 1 domain error (or failed verification), 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "key = value" lines; '#' starts a comment. Throws on malformed lines.
std::map<std::string, std::string> parse_config(const std::string& text);

}  // namespace pintersect::cli

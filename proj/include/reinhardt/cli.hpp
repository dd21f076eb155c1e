#pragma once

#include "reinhardt/boundary.hpp"
#include "reinhardt/logdiagram.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace reinhardt {

inline constexpr int kSchemaVersion = 1;

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitVerifyFail = 2;
inline constexpr int kExitInternal = 3;

nlohmann::json envelope_to_json(const EnvelopeResult& r);
nlohmann::json boundary_to_json(const BoundaryReport& r);

/// Runs one subcommand. `args` excludes the program name. The JSON document
/// goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace reinhardt

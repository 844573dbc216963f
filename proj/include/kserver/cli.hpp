#pragma once

#include <iosfwd>

namespace kserver {

/// Exit codes of the kserver_lab tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitBadMetric = 2,
  kExitDegenerateK = 3,
  kExitTooLarge = 4,
  kExitUnknownPoint = 5,
  kExitBadEpsilon = 6,
};

/// Entry point of the command-line tool, parameterised on the streams so the
/// commands can be driven from tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kserver

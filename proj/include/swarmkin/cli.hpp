#pragma once

#include <iosfwd>

namespace swarmkin::cli {

// Process exit statuses. Every failure also prints one line to stderr:
//   error: code=<name> exit=<status> message=<text>
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kUnknownPreset = 3,
  kMalformedConfig = 4,
  kOutputDir = 5,
  kIo = 6,
  kAborted = 7,
};

/// Environment variable naming the default output root.
inline constexpr const char* kOutRootEnv = "SWARMKIN_OUT_ROOT";

int run_cli(int argc, char** argv);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace swarmkin::cli

#ifndef RFABE_CLI_H_
#define RFABE_CLI_H_

#include <ostream>

namespace rfabe {

// Stable process exit codes of the rfabe tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitNotSatisfied = 3,
  kExitPreverification = 4,
  kExitIntegrity = 5,
  kExitIo = 6,
  kExitPayloadAuth = 7,
};

// Entry point of the rfabe tool; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rfabe

#endif  // RFABE_CLI_H_

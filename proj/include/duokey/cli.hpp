#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace duokey::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,      // bad flags or malformed bit/hex arguments
  kBadInput = 3,   // unreadable or invalid file contents, rejected request
  kRefused = 4,    // login refused, unauthorized, unknown challenge
  kConflict = 5,   // pattern already enrolled
  kNetwork = 6,    // server unreachable or failing
};

// Runs one `duokey` invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace duokey::cli

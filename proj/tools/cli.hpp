#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rii::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,       // parse or validation failure
  kBreakdown = 2,
  kMaxIter = 3,
  kVerifyFailed = 4,
};

/// Runs the rii-gev command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rii::cli

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qmoney::cli {

enum ExitCode : int {
  kSuccess = 0,
  kNotCertified = 1,  // also numeric failure
  kUsageError = 2,    // bad arguments, unknown names, unparsable files
  kDimensionError = 3,
};

/// Entry point shared by the `qmoney` tool and the tests; args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmoney::cli

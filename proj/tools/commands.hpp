#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iserre::cli {

enum ExitCode { kVerified = 0, kRefuted = 1, kInputError = 2 };

/// Entry point shared by the executable and the tests; args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iserre::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace muxdyn::cli {

enum ExitCode : int {
    ok = 0,
    property_failed = 1,
    input_error = 2,
    numerical_error = 3,
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace muxdyn::cli

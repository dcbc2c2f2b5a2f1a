#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dpbinom::cli {

// Full command-line entry point; returns the process exit status.
// 0 = success, 2 = validation error, 3 = convergence or internal error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dpbinom::cli

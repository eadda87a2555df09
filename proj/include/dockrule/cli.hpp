#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace dockrule {

// Full command-line driver; args exclude the program name. Returns the
// process exit code: 0 clean, 1 when enforcement found violations, 2 on
// operational errors (bad usage, unreadable input, parse failure).
int cli_run(const std::vector<std::string>& args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace dockrule

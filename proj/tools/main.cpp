#include <vector>

#include "dockrule/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dockrule::cli_run(args);
}

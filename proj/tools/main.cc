#include <iostream>
#include <string>
#include <vector>

#include "upoblab/cli.h"

int main(int argc, char** argv) {
    upoblab::configure_logging_from_env();
    std::vector<std::string> args(argv + 1, argv + argc);
    return upoblab::run_cli(args, std::cout, std::cerr);
}

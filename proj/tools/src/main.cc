#include <iostream>
#include <string>
#include <vector>

#include "xyzca/cli.h"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return xyzca::cli::run(args, std::cout, std::cerr);
}

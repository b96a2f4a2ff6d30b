#include <iostream>
#include <string>
#include <vector>

#include "idem/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return idem::cli::run(args, std::cout, std::cerr);
}

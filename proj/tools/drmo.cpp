#include <iostream>
#include <string>
#include <vector>

#include "drmo/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return drmo::cli::run(args, std::cout, std::cerr);
}

#include <iostream>
#include <string>
#include <vector>

#include "downclose/cli.hh"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return downclose::cli::run(args, std::cout, std::cerr);
}

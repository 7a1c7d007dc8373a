#include <iostream>

#include "uml2ts/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return uml2ts::cli::run(args, std::cout, std::cerr);
}

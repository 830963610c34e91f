#include <iostream>
#include <string>
#include <vector>

#include "qdetect/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qdetect::cli::run(args, std::cout, std::cerr);
}

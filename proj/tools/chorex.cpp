#include <iostream>

#include "chorex/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return chorex::run_cli(args, std::cout, std::cerr);
}

#include <iostream>
#include <string>
#include <vector>

#include "wk/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wk::cli_dispatch(args, std::cout, std::cerr);
}

#include <iostream>

#include "memini/cli.hpp"

int main(int argc, char** argv) {
    return memini::run_cli(argc, argv, std::cout, std::cerr);
}

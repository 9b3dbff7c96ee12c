#include "slab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return slab::cli_main(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "circlops/cli.hpp"

int main(int argc, char** argv) { return circlops::cli_main(argc, argv, std::cout, std::cerr); }

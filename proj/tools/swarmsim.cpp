#include <iostream>

#include "swarmsim/cli.hpp"

int main(int argc, char** argv) { return swarmsim::run_cli(argc, argv, std::cout, std::cerr); }

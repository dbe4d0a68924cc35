#include <iostream>

#include "gelfand/cli.hpp"

int main(int argc, char** argv) { return gelfand::run_cli(argc, argv, std::cout, std::cerr); }

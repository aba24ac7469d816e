#include <iostream>

#include "bai/cli/commands.hpp"

int main(int argc, char** argv) { return bai::cli::run_cli(argc, argv, std::cout, std::cerr); }

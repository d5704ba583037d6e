#include <iostream>

#include "latentspec/cli/commands.hpp"

int main(int argc, char** argv) { return latentspec::cli::run_cli(argc, argv, std::cout, std::cerr); }

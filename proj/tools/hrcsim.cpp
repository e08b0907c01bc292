#include <iostream>

#include "hrc/cli/commands.hpp"

int main(int argc, char** argv) { return hrc::cli::run(argc, argv, std::cout, std::cerr); }

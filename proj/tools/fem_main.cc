#include <iostream>

#include "cli/commands.h"

int main(int argc, char** argv) { return fem::cli::FemMain(argc, argv, std::cout, std::cerr); }

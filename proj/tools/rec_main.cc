#include <iostream>

#include "cli/commands.h"

int main(int argc, char** argv) { return fem::cli::RecMain(argc, argv, std::cout, std::cerr); }

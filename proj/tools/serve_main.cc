#include <iostream>

#include "cli/commands.h"

int main(int argc, char** argv) { return fem::cli::ServeMain(argc, argv, std::cout, std::cerr); }

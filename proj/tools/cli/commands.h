#pragma once

#include <iosfwd>

namespace fem::cli {

// Entry points of the three executables. Return the process exit code;
// errors are reported on `err`.
int FemMain(int argc, char** argv, std::ostream& out, std::ostream& err);
int RecMain(int argc, char** argv, std::ostream& out, std::ostream& err);
int ServeMain(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fem::cli

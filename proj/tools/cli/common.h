#pragma once

#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fem/projection/projection.h"

namespace fem::cli {

// Query options shared by `fem query` and `rec recommend`.
struct QueryArgs {
  std::string latex;
  std::string context;
  std::string question;
  std::string abstract;
  std::vector<std::string> keywords;
  std::vector<std::string> topics;

  void Register(CLI::App& app);
  projection::QueryFormula ToQuery() const;
};

void AddVerbosity(CLI::App& app, bool& quiet);

// Runs `fn`, mapping library errors to exit code 1 and a message on `err`.
template <typename Fn>
int Report(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fem::cli

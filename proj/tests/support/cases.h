#pragma once

// Hand-labelled inputs shared by unit and acceptance tests.

#include <optional>
#include <vector>

#include "fem/map/direction.h"

namespace fem::testing {

struct CascadeCase {
  std::optional<int> year_a, year_b;
  std::uint64_t complexity_a, complexity_b;
  double generality_a, generality_b;
  const char* id_a;
  const char* id_b;
  bool a_to_b;
  map::DirectionRule rule;

  map::DirectionInput A() const { return {id_a, year_a, complexity_a, generality_a}; }
  map::DirectionInput B() const { return {id_b, year_b, complexity_b, generality_b}; }
};

// Thirty cases covering every rule, both argument orders, the 0.1 ratio
// boundary (hit exactly by 10/100 and 1/10) and the 0/0 complexity case.
const std::vector<CascadeCase>& CascadeCases();

}  // namespace fem::testing

#include "cases.h"

namespace fem::testing {

const std::vector<CascadeCase>& CascadeCases() {
  constexpr auto kTime = map::DirectionRule::kBirthTime;
  constexpr auto kCx = map::DirectionRule::kComplexity;
  constexpr auto kGen = map::DirectionRule::kGenerality;
  constexpr auto kId = map::DirectionRule::kIdTieBreak;
  constexpr std::optional<int> kNone;
  static const std::vector<CascadeCase> cases = {
      {1950, 1990, 5, 5, 0.1, 0.1, "a", "b", true, kTime},
      {1990, 1950, 5, 5, 0.1, 0.1, "a", "b", false, kTime},
      {1950, kNone, 10, 30, 0.1, 0.1, "a", "b", true, kCx},
      {kNone, 1950, 30, 10, 0.1, 0.1, "a", "b", false, kCx},
      {2000, 2000, 10, 30, 0.1, 0.1, "a", "b", true, kCx},
      {kNone, kNone, 10, 30, 0.1, 0.1, "a", "b", true, kCx},
      {kNone, kNone, 30, 10, 0.1, 0.1, "a", "b", false, kCx},
      {kNone, kNone, 20, 21, 0.3, 0.1, "a", "b", true, kGen},
      {kNone, kNone, 21, 20, 0.1, 0.3, "a", "b", false, kGen},
      {kNone, kNone, 90, 100, 0.1, 0.9, "a", "b", true, kCx},
      {kNone, kNone, 100, 90, 0.9, 0.1, "a", "b", false, kCx},
      {kNone, kNone, 91, 100, 0.2, 0.4, "a", "b", false, kGen},
      {kNone, kNone, 0, 0, 0.5, 0.2, "a", "b", true, kGen},
      {kNone, kNone, 0, 0, 0.5, 0.5, "a", "b", true, kId},
      {kNone, kNone, 0, 0, 0.5, 0.5, "b", "a", false, kId},
      {kNone, kNone, 0, 5, 0.1, 0.9, "a", "b", true, kCx},
      {kNone, kNone, 5, 0, 0.9, 0.1, "a", "b", false, kCx},
      {kNone, kNone, 7, 7, 0.25, 0.25, "f1", "f10", true, kId},
      {1800, 1801, 100, 1, 0.0, 0.9, "a", "b", true, kTime},
      {2020, 1999, 1, 100, 0.9, 0.0, "a", "b", false, kTime},
      {1970, 1970, 20, 21, 0.1, 0.3, "a", "b", false, kGen},
      {1970, 1970, 8, 8, 0.2, 0.2, "x", "w", false, kId},
      {kNone, kNone, 1000, 1099, 0.7, 0.6, "a", "b", true, kGen},
      {kNone, kNone, 1000, 1112, 0.1, 0.9, "a", "b", true, kCx},
      {kNone, kNone, 1112, 1000, 0.9, 0.1, "a", "b", false, kCx},
      {1900, kNone, 50, 50, 0.1, 0.2, "a", "b", false, kGen},
      {kNone, 1900, 50, 50, 0.2, 0.2, "m", "n", true, kId},
      {kNone, kNone, 10, 9, 0.9, 0.1, "a", "b", false, kCx},
      {kNone, kNone, 9, 10, 0.1, 0.9, "a", "b", true, kCx},
      {kNone, kNone, 1, 1, 0.0, 0.0, "z", "a", false, kId},
  };
  return cases;
}

}  // namespace fem::testing

#include "fem/map/direction.h"

#include <algorithm>

namespace fem::map {

Direction DetermineDirection(const DirectionInput& a, const DirectionInput& b,
                             double ratio_threshold) {
  if (a.birth_year && b.birth_year && *a.birth_year != *b.birth_year) {
    return {*a.birth_year < *b.birth_year, DirectionRule::kBirthTime};
  }
  const std::uint64_t hi = std::max(a.complexity, b.complexity);
  if (hi > 0) {
    const std::uint64_t gap = hi - std::min(a.complexity, b.complexity);
    const double ratio = static_cast<double>(gap) / static_cast<double>(hi);
    if (ratio >= ratio_threshold) return {a.complexity < b.complexity, DirectionRule::kComplexity};
  }
  if (a.generality != b.generality) return {a.generality > b.generality, DirectionRule::kGenerality};
  return {a.id < b.id, DirectionRule::kIdTieBreak};
}

}  // namespace fem::map

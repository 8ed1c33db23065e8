#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace fem::map {

struct DirectionInput {
  std::string id;
  std::optional<int> birth_year;
  std::uint64_t complexity = 0;
  double generality = 0.0;
};

enum class DirectionRule { kBirthTime, kComplexity, kGenerality, kIdTieBreak };

struct Direction {
  bool a_to_b = true;
  DirectionRule rule = DirectionRule::kBirthTime;
};

inline constexpr double kComplexityRatioThreshold = 0.1;

// Cascade: earlier birth year first; otherwise, when the relative complexity
// gap |ca - cb| / max(ca, cb) is at least the threshold, simpler first;
// otherwise higher generality first, and on equal generality the smaller id.
// 0/0 counts as below the threshold.
Direction DetermineDirection(const DirectionInput& a, const DirectionInput& b,
                             double ratio_threshold = kComplexityRatioThreshold);

}  // namespace fem::map

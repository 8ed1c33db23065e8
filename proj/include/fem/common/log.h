#pragma once

#include <string_view>

namespace fem::log {

enum class Level { kDebug = 0, kInfo = 1, kWarning = 2, kError = 3, kQuiet = 4 };

void SetLevel(Level level);
Level GetLevel();

void Info(std::string_view message);
void Warning(std::string_view message);
void Error(std::string_view message);

}  // namespace fem::log

#include "fem/common/log.h"

#include <atomic>
#include <iostream>
#include <mutex>

namespace fem::log {
namespace {

std::atomic<Level> g_level{Level::kInfo};
std::mutex g_mutex;

void Emit(Level level, const char* tag, std::string_view message) {
  if (level < g_level.load()) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << '[' << tag << "] " << message << '\n';
}

}  // namespace

void SetLevel(Level level) { g_level.store(level); }
Level GetLevel() { return g_level.load(); }

void Info(std::string_view message) { Emit(Level::kInfo, "info", message); }
void Warning(std::string_view message) { Emit(Level::kWarning, "warn", message); }
void Error(std::string_view message) { Emit(Level::kError, "error", message); }

}  // namespace fem::log

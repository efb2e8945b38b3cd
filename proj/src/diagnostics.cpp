#include "sphereot/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace sphereot {
namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler_slot() {
  static WarningHandler h = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(handler_mutex());
  WarningHandler previous = std::move(handler_slot());
  handler_slot() = handler ? std::move(handler) : [](const std::string&) {};
  return previous;
}

void warn(const std::string& message) {
  std::lock_guard lock(handler_mutex());
  handler_slot()(message);
}

}  // namespace sphereot

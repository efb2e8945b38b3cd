#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace sphereot {

// Bad arguments, malformed files, configuration mismatches.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite intermediates, failed convergence.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(const std::string&)>;

// Installs a process-wide warning sink and returns the previous one.
// The default writes "warning: <msg>" to stderr.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace sphereot

#pragma once

#include <stdexcept>
#include <string>

namespace first {

/// Raised for malformed user input: unreadable files, bad columns, invalid
/// configuration. The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace first

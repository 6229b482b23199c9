#pragma once

#include <stdexcept>
#include <string>

namespace cellscape {

// Bad user input (files, coordinates, config). Maps to exit code 1 / CS_ERR_INPUT.
class input_error : public std::runtime_error {
public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken internal invariant. Maps to exit code 2 / CS_ERR_INTERNAL.
class internal_error : public std::runtime_error {
public:
  explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require_input(bool ok, const std::string& msg) {
  if (!ok) throw input_error(msg);
}

inline void require_internal(bool ok, const std::string& msg) {
  if (!ok) throw internal_error(msg);
}

}  // namespace cellscape

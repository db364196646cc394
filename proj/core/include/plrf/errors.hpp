#pragma once

#include <stdexcept>
#include <string>

namespace plrf {

// Invalid user-facing configuration (CLI exit code 2).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A solver or stability gate failed (CLI exit code 3).
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace plrf

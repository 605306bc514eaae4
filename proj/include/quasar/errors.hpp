#pragma once

#include <stdexcept>
#include <string>

namespace quasar {

// Invalid user configuration: bad constants, unknown names, inconsistent options.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input text with a location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what) {}
};

}  // namespace quasar

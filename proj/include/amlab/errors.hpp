#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace amlab {

// Malformed concrete syntax; offset is a byte position into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t offset)
      : std::runtime_error(std::move(message)), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// An operation that requires a closed term was given an open one.
class OpenTermError : public std::runtime_error {
 public:
  explicit OpenTermError(std::vector<std::string> free_names);
  [[nodiscard]] const std::vector<std::string>& free_names() const {
    return free_names_;
  }

 private:
  std::vector<std::string> free_names_;
};

// A weak machine met a variable its environment cannot resolve.
class UnboundVariableError : public std::runtime_error {
 public:
  explicit UnboundVariableError(const std::string& name)
      : std::runtime_error("unbound variable: " + name) {}
};

// A machine reached a configuration where the transition rules are not
// exhaustive or not mutually exclusive. Always a bug; surfaces as exit
// code 4 in the CLI, with the offending configuration attached.
class InvariantViolation : public std::logic_error {
 public:
  InvariantViolation(const std::string& what, std::string config)
      : std::logic_error(what), config_(std::move(config)) {}
  [[nodiscard]] const std::string& config() const { return config_; }

 private:
  std::string config_;
};

}  // namespace amlab

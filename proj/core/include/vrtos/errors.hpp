#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vrtos {

// Invalid problem description, option or structural mismatch.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data. `line` is 1-based when the source is line oriented.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, std::size_t line)
      : std::runtime_error(std::move(msg)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Non-finite or exploding iterates during a solver run.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::string msg, std::size_t step)
      : std::runtime_error(std::move(msg)), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vrtos

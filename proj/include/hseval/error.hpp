#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hseval {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file problem, located by file, line and field.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, std::string field,
             const std::string& reason)
      : Error(file + ":" + std::to_string(line) +
              (field.empty() ? std::string() : ": field '" + field + "'") +
              ": " + reason),
        file_(std::move(file)),
        line_(line),
        field_(std::move(field)) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

}  // namespace hseval

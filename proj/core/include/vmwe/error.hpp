#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vmwe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input line; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed lines that do not describe a valid dependency tree.
class StructuralError : public Error {
 public:
  StructuralError(std::string sent_id, const std::string& what)
      : Error("sentence " + sent_id + ": " + what), sent_id_(std::move(sent_id)) {}
  const std::string& sent_id() const noexcept { return sent_id_; }

 private:
  std::string sent_id_;
};

/// Bad user input: configuration, arguments, mismatched artifacts.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace vmwe

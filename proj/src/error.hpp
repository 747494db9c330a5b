#pragma once

#include <stdexcept>
#include <string>

namespace fresh {

enum class ErrorKind {
  invalid_argument,
  degenerate_input,
  diverged,
  io,
  not_found,
};

// Every failure raised by the library carries a kind so the C boundary can map
// it to a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::invalid_argument, what) {}
};

class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& what) : Error(ErrorKind::degenerate_input, what) {}
};

class Diverged : public Error {
 public:
  Diverged(const std::string& what, int step) : Error(ErrorKind::diverged, what), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class NotFound : public Error {
 public:
  explicit NotFound(const std::string& what) : Error(ErrorKind::not_found, what) {}
};

}  // namespace fresh

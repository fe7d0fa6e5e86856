#pragma once

#include <stdexcept>
#include <string>

namespace qccd {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text; carries the 1-based source line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct CapacityError : Error {
  using Error::Error;
};

struct ScheduleError : Error {
  using Error::Error;
};

struct LimitError : Error {
  using Error::Error;
};

}  // namespace qccd

#pragma once

#include <stdexcept>
#include <string>

namespace koutcube {

// Every refusal raised by the library derives from Error so callers can catch
// one type; the CLI maps BudgetExceeded to a runtime refusal and the rest to
// usage errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class NoRoom : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace koutcube

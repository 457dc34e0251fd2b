#pragma once

#include <stdexcept>
#include <string>

namespace gramtrans {

// Base of every error the library throws. Callers that only want to report
// a failure can catch this; the subclasses carry structured detail.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownLocale : public Error {
 public:
  explicit UnknownLocale(std::string code)
      : Error("unknown locale '" + code + "'"), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace gramtrans

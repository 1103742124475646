#pragma once

#include <stdexcept>
#include <string>

namespace crnperm {

enum class ErrorKind {
  kDomain,         // argument outside the operation's domain
  kParse,          // malformed network document
  kIntegration,    // ODE integration failed
  kCertification,  // a construction could not be completed
  kNumeric,        // non-finite value or solver non-convergence
  kNotFound,       // unknown corpus entry or missing resource
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

[[noreturn]] inline void throw_domain(const std::string& what) {
  throw Error(ErrorKind::kDomain, what);
}

}  // namespace crnperm

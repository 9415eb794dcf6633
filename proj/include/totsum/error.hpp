#pragma once

#include <stdexcept>
#include <string>

namespace totsum {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind {
  domain,    // argument outside the operation's domain (n = 0, non-prime p, ...)
  overflow,  // result does not fit in Nat
  range,     // argument beyond a supported range (table limit, primality bound)
  resource,  // memory cap exceeded
  parse,     // malformed text input
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace totsum

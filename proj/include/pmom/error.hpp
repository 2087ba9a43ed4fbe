#pragma once

#include <stdexcept>
#include <string>

namespace pmom {

// Error categories map onto CLI exit codes (see tools/pmoments.cpp).
enum class ErrorKind {
  InvalidWindow,
  InvalidOrder,
  InvalidArgument,
  Domain,
  Range,
  Precondition,
  CorruptCache,
  Io,
  Invariant,
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

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidWindow: return "invalid-window";
    case ErrorKind::InvalidOrder: return "invalid-order";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Domain: return "domain-error";
    case ErrorKind::Range: return "range-error";
    case ErrorKind::Precondition: return "precondition-violation";
    case ErrorKind::CorruptCache: return "corrupt-cache";
    case ErrorKind::Io: return "io-error";
    case ErrorKind::Invariant: return "invariant-failure";
  }
  return "error";
}

}  // namespace pmom

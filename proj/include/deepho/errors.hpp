#pragma once

#include <stdexcept>
#include <string>

namespace deepho {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or structural invariant was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A size, coefficient or time budget was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

/// A requested stage or degree lies outside the computed range.
class RangeError : public Error {
 public:
  using Error::Error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ContractViolation(what);
}

}  // namespace deepho

#pragma once

#include <stdexcept>
#include <string>

namespace strtop {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// malformed input structure (bad involution, bad cyclic order, broken labels)
struct ValidationError : Error {
  using Error::Error;
};

// an operation was called outside its domain
struct PreconditionError : Error {
  using Error::Error;
};

// canonical labeling cannot be rooted without an arbitrary choice
struct AmbiguityError : Error {
  using Error::Error;
};

// configured enumeration budget exceeded
struct ResourceError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace strtop

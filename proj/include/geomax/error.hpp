#pragma once

#include <stdexcept>
#include <string>

namespace geomax {

enum class ErrorKind {
  InvalidArgument,  // precondition violated by the caller
  Config,           // malformed experiment configuration
  Resolution,       // grid too coarse or window too small for the request
  Degenerate,       // geometric degeneracy (zero volume body, empty family)
  Numerical,        // iteration failed to converge
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace geomax

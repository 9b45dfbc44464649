#pragma once

#include <stdexcept>

namespace roughsum {

// A computation would exceed a configured size cap or could not allocate.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The hypotheses under which an identity holds are not met by the input.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace roughsum

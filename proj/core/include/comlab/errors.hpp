#ifndef COMLAB_ERRORS_HPP
#define COMLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace comlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: scenario/protocol files, structure tables.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Precondition violation: zero-mass rectangles, containment, parameter range.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Combinatorial enumeration would exceed its guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace comlab

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace polarfk {

// Base class for every error raised by the library. Each subclass names one
// failure family; `what()` carries the one-line detail shown by the CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define POLARFK_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    using Error::Error;                                              \
    const char* kind() const noexcept override { return #Name; }     \
  };

// geometry
POLARFK_DEFINE_ERROR(IncompatiblePolarizer)
POLARFK_DEFINE_ERROR(DegeneratePolarizer)
POLARFK_DEFINE_ERROR(NotAdmissible)
POLARFK_DEFINE_ERROR(PoolViolation)
POLARFK_DEFINE_ERROR(OutOfBounds)
POLARFK_DEFINE_ERROR(InvalidShape)
// rearrange
POLARFK_DEFINE_ERROR(SignedInput)
// discretize
POLARFK_DEFINE_ERROR(MalformedDomain)
POLARFK_DEFINE_ERROR(DirichletViolation)
// eigensolve
POLARFK_DEFINE_ERROR(NoFreeNodes)
POLARFK_DEFINE_ERROR(ZeroFunction)
POLARFK_DEFINE_ERROR(InvalidConfig)
// experiments
POLARFK_DEFINE_ERROR(AssumptionViolated)
POLARFK_DEFINE_ERROR(SymmetryHypothesisViolated)
POLARFK_DEFINE_ERROR(EmptyAdmissibleSet)
// cli_io
POLARFK_DEFINE_ERROR(ParseError)
POLARFK_DEFINE_ERROR(ValidationError)
POLARFK_DEFINE_ERROR(IoError)

#undef POLARFK_DEFINE_ERROR

}  // namespace polarfk

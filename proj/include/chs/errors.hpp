#pragma once

#include <stdexcept>
#include <string>

namespace chs {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CHS_DEFINE_ERROR(Name)        \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  }

CHS_DEFINE_ERROR(InvalidArgument);
CHS_DEFINE_ERROR(DistinctnessViolation);
CHS_DEFINE_ERROR(BudgetExceeded);
CHS_DEFINE_ERROR(LengthMismatch);
CHS_DEFINE_ERROR(IndexOutOfRange);
CHS_DEFINE_ERROR(PoleHit);
CHS_DEFINE_ERROR(ZeroCoefficient);
CHS_DEFINE_ERROR(UnsupportedExponent);
CHS_DEFINE_ERROR(NonConvergedQuadrature);
CHS_DEFINE_ERROR(OddDimension);
CHS_DEFINE_ERROR(BracketFailure);
CHS_DEFINE_ERROR(RootIsolationFailure);
CHS_DEFINE_ERROR(ConvergenceFailure);
CHS_DEFINE_ERROR(SamplerDegenerate);
CHS_DEFINE_ERROR(Overflow);

#undef CHS_DEFINE_ERROR

}  // namespace chs

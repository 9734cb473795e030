#pragma once

#include <stdexcept>
#include <string>

namespace floatsolid {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FLOATSOLID_DEFINE_ERROR(Name)          \
  class Name : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  }

FLOATSOLID_DEFINE_ERROR(InvalidParams);
FLOATSOLID_DEFINE_ERROR(ExcludedLambda);
FLOATSOLID_DEFINE_ERROR(DegenerateLambda);
FLOATSOLID_DEFINE_ERROR(RootFindingFailure);
FLOATSOLID_DEFINE_ERROR(SingularMatrix);
FLOATSOLID_DEFINE_ERROR(NoConvergence);
FLOATSOLID_DEFINE_ERROR(ImaginaryAxisEigenvalue);
FLOATSOLID_DEFINE_ERROR(UnstableClosedLoop);
FLOATSOLID_DEFINE_ERROR(NonDecayingOmega);
FLOATSOLID_DEFINE_ERROR(GridMismatch);
FLOATSOLID_DEFINE_ERROR(SpectrumProximity);
FLOATSOLID_DEFINE_ERROR(InvalidGeometry);
FLOATSOLID_DEFINE_ERROR(CompatibilityViolation);
FLOATSOLID_DEFINE_ERROR(SingularSystem);
FLOATSOLID_DEFINE_ERROR(NonDecayingTail);
FLOATSOLID_DEFINE_ERROR(ConfigError);
FLOATSOLID_DEFINE_ERROR(FormatError);

#undef FLOATSOLID_DEFINE_ERROR

}  // namespace floatsolid

#pragma once

#include <stdexcept>
#include <string>

namespace bolax {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define BOLAX_DEFINE_ERROR(Name)                  \
  struct Name : Error {                           \
    explicit Name(const std::string& msg = #Name) \
        : Error(std::string(#Name) + ": " + msg) {}\
  }

BOLAX_DEFINE_ERROR(EmptyCoefficients);
BOLAX_DEFINE_ERROR(ZeroLeadingCoefficient);
BOLAX_DEFINE_ERROR(ZeroArgument);
BOLAX_DEFINE_ERROR(GridTooCoarse);
BOLAX_DEFINE_ERROR(NotWeaklyBellShaped);
BOLAX_DEFINE_ERROR(TruncationTooSmall);
BOLAX_DEFINE_ERROR(ConvergenceFailure);
BOLAX_DEFINE_ERROR(OutOfRangeEta);
BOLAX_DEFINE_ERROR(QuadratureNoConvergence);
BOLAX_DEFINE_ERROR(BranchCountEven);
BOLAX_DEFINE_ERROR(NotEven);
BOLAX_DEFINE_ERROR(DegenerateCriticalPoints);
BOLAX_DEFINE_ERROR(OutOfRegion);
BOLAX_DEFINE_ERROR(InsufficientLadder);
BOLAX_DEFINE_ERROR(RootPolishFailure);
BOLAX_DEFINE_ERROR(OnBranchCut);
BOLAX_DEFINE_ERROR(BranchCutCrossing);
BOLAX_DEFINE_ERROR(MalformedTree);
BOLAX_DEFINE_ERROR(BlowupDetected);
BOLAX_DEFINE_ERROR(PhaseUnwrapAmbiguity);
BOLAX_DEFINE_ERROR(ConfigInvalid);
BOLAX_DEFINE_ERROR(ComputeError);

#undef BOLAX_DEFINE_ERROR

}  // namespace bolax

#pragma once

#include <stdexcept>
#include <string>

namespace mfb {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define MFB_DEFINE_ERROR(Name)                                \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& what) : Error(what) {}   \
  }

// chart / field layer
MFB_DEFINE_ERROR(PointOutsideDomain);
MFB_DEFINE_ERROR(NoTransitionPath);
MFB_DEFINE_ERROR(NotInOverlap);
MFB_DEFINE_ERROR(DegenerateMetric);

// bundle / atlas layer
MFB_DEFINE_ERROR(PhiNotInvertibleOnFiber);
MFB_DEFINE_ERROR(NoTrivialization);
MFB_DEFINE_ERROR(DegenerateFiberMetric);
MFB_DEFINE_ERROR(AtlasInconsistent);
MFB_DEFINE_ERROR(NonHausdorffQuotient);

// potential / fluid / dynamics layer
MFB_DEFINE_ERROR(FiberTangentDegenerate);
MFB_DEFINE_ERROR(FlowNotPeriodic);
MFB_DEFINE_ERROR(NotFluidForm);
MFB_DEFINE_ERROR(NonUniqueEigenspace);
MFB_DEFINE_ERROR(LeftAllCharts);
MFB_DEFINE_ERROR(TangentMapSingular);
MFB_DEFINE_ERROR(FiberMetricNotPositive);
MFB_DEFINE_ERROR(NotRoundSphere);

// scenario ingestion
MFB_DEFINE_ERROR(ParseError);
MFB_DEFINE_ERROR(ValidationError);

#undef MFB_DEFINE_ERROR

}  // namespace mfb

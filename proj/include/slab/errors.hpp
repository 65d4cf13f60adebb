#pragma once

#include <stdexcept>
#include <string>

namespace slab {

struct lab_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define SLAB_DEFINE_ERROR(Name)                      \
    struct Name : lab_error {                        \
        using lab_error::lab_error;                  \
    }

SLAB_DEFINE_ERROR(AsymmetricInput);
SLAB_DEFINE_ERROR(NotPositiveDefinite);
SLAB_DEFINE_ERROR(RadiusCapExceeded);
SLAB_DEFINE_ERROR(NoConvergence);
SLAB_DEFINE_ERROR(WrongGenus);
SLAB_DEFINE_ERROR(DegenerateQuery);
SLAB_DEFINE_ERROR(SingularSystem);
SLAB_DEFINE_ERROR(NotOnDivisor);
SLAB_DEFINE_ERROR(DegreeMismatch);
SLAB_DEFINE_ERROR(TruncationUnderflow);
SLAB_DEFINE_ERROR(NonUnitLeadingCoefficient);
SLAB_DEFINE_ERROR(NotCommuting);
SLAB_DEFINE_ERROR(NoSolution);
SLAB_DEFINE_ERROR(NotMonic);
SLAB_DEFINE_ERROR(ResidueObstruction);
SLAB_DEFINE_ERROR(NoRelationAtDepth);
SLAB_DEFINE_ERROR(SchemaError);
SLAB_DEFINE_ERROR(InvariantViolation);
SLAB_DEFINE_ERROR(DivisorCollision);
SLAB_DEFINE_ERROR(GridTooCoarse);
SLAB_DEFINE_ERROR(TrackLost);
SLAB_DEFINE_ERROR(SeedNotFound);
SLAB_DEFINE_ERROR(UnknownCheck);

#undef SLAB_DEFINE_ERROR

}  // namespace slab

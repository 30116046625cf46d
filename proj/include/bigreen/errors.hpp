#pragma once

#include <stdexcept>
#include <string>

namespace bigreen {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfDomain : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};
struct DegenerateConfiguration : Error {
    using Error::Error;
};
struct DuplicateNodes : Error {
    using Error::Error;
};
struct NoRoot : Error {
    using Error::Error;
};
struct NotRegion1 : Error {
    using Error::Error;
};
struct NotRegion2 : Error {
    using Error::Error;
};
struct NoValidBranch : Error {
    using Error::Error;
};
struct MultipleValidBranches : Error {
    using Error::Error;
};
struct DegenerateDenominator : Error {
    using Error::Error;
};
struct InvalidBranch : Error {
    using Error::Error;
};
struct AlphaEqualsBeta : Error {
    using Error::Error;
};
struct NotOnDisk : Error {
    using Error::Error;
};
struct NotOnSlice : Error {
    using Error::Error;
};
struct NoHypersurfaceFound : Error {
    using Error::Error;
};
struct CertificateGapExceeded : Error {
    using Error::Error;
};
struct ContinuityFailure : Error {
    using Error::Error;
};
struct EmptySurface : Error {
    using Error::Error;
};
struct NotInG : Error {
    using Error::Error;
};
struct DegeneratePole : Error {
    using Error::Error;
};
struct NonConvergence : Error {
    using Error::Error;
};

}  // namespace bigreen

#pragma once

#include <stdexcept>
#include <string>

namespace orbitsense {

/*
 * Domain error hierarchy. Every failure mode a caller is expected to handle
 * gets its own type; generic logic errors stay std::logic_error.
 */
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two points from different state spaces fed to one metric.
struct MixedSpaceError : Error {
    using Error::Error;
};

// A symbolic comparison or pipeline needed symbols beyond the extension limit.
struct WindowExhaustedError : Error {
    using Error::Error;
};

// A mechanical-word evaluation landed exactly on a discontinuity of the
// coding partition; the intercept belongs to the ambiguous set.
struct PrecisionExhaustedError : Error {
    using Error::Error;
};

// A language scan did not stabilize (or an internal structural check failed).
struct CertificationFailedError : Error {
    using Error::Error;
};

// A cylinder walk was asked to go deeper than the oracle certifies.
struct CertifiedDepthExceededError : Error {
    using Error::Error;
};

// A point fell into no member of a finite cover during a cover-separation run.
struct CoverageGapError : Error {
    using Error::Error;
};

// An epsilon-net would exceed the configured maximum size.
struct NetTooLargeError : Error {
    using Error::Error;
};

// An orbit horizon beyond the configured maximum was requested.
struct HorizonTooLargeError : Error {
    using Error::Error;
};

// No sample fell inside a requested region.
struct EmptyRegionError : Error {
    using Error::Error;
};

// A plot request named a series the report does not contain.
struct MissingSeriesError : Error {
    using Error::Error;
};

// A corpus system failed its construction-time consistency checks.
struct ConstructionFailedError : Error {
    using Error::Error;
};

// Bad experiment configuration; message carries the field path.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace orbitsense

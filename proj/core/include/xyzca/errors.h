#ifndef XYZCA_ERRORS_H
#define XYZCA_ERRORS_H

#include <stdexcept>
#include <string>

namespace xyzca {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Lattice dimensions that are not positive multiples of three.
struct DimensionError : Error {
    using Error::Error;
};

/// A frame was expected to commute with every stabilizer but does not.
struct NotInNormalizer : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of a rate or probability formula.
struct DomainError : Error {
    using Error::Error;
};

/// Rate table that would need a negative cellular-automaton rate.
struct NegativeRate : Error {
    using Error::Error;
};

/// Inconsistent simulation or experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

struct ProbabilityError : Error {
    using Error::Error;
};

struct DegenerateFit : Error {
    using Error::Error;
};

struct EmptyInput : Error {
    using Error::Error;
};

/// Malformed serialized data (frame JSON, bit strings, hex planes).
struct FormatError : Error {
    using Error::Error;
};

}  // namespace xyzca

#endif

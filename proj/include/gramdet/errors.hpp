#pragma once

#include <stdexcept>
#include <string>

namespace gramdet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape or size mismatch between operands.
struct DimensionError : Error {
    using Error::Error;
};

// Matrix singular to working tolerance.
struct SingularMatrixError : Error {
    using Error::Error;
};

// Kernel applied to an observation variant it does not support.
struct KernelDomainError : Error {
    using Error::Error;
};

// Malformed input file.
struct ParseError : Error {
    using Error::Error;
};

// Invalid run configuration (flags, parameters).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace gramdet

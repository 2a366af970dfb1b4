#pragma once

#include <stdexcept>
#include <string>

namespace blockcoh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A domain-type invariant was violated (non-Hermitian input, bad permutation, ...).
struct InvariantError : Error {
    using Error::Error;
};

// Operands have incompatible dimensions.
struct DimensionError : Error {
    using Error::Error;
};

// Input file / JSON does not match the expected schema.
struct ParseError : Error {
    using Error::Error;
};

// Iterative solver exhausted its budget; carries the best bracket found.
struct ConvergenceError : Error {
    double lower;
    double upper;
    ConvergenceError(const std::string& what, double lo, double hi)
        : Error(what), lower(lo), upper(hi) {}
};

}  // namespace blockcoh

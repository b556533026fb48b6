#pragma once

#include <stdexcept>
#include <string>

namespace betamarg {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Gamma argument hit a non-positive integer inside a falling product.
struct PoleCrossing : Error {
    using Error::Error;
};

// The erf reduction left a residual x^(-1/2)*e^(-sx)*erf(...) integral.
struct NonElementaryIntegral : Error {
    using Error::Error;
};

struct IntegrabilityViolation : Error {
    using Error::Error;
};

struct DivergentLimit : Error {
    using Error::Error;
};

struct RegimeUnsupported : Error {
    using Error::Error;
};

// Expansion term outside what an operation can handle exactly.
struct UnsupportedTermShape : Error {
    using Error::Error;
};

struct ZeroIntegral : Error {
    using Error::Error;
};

struct NonConvergence : Error {
    using Error::Error;
};

struct BadParameter : Error {
    using Error::Error;
};

}  // namespace betamarg

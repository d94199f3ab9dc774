// errors.hpp: exception types shared by all qdeph modules

#pragma once

#include <stdexcept>
#include <string>

namespace qdeph {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid physical or numerical parameter (μ ≤ −1, ω_c ≤ 0, p ∉ [0,1], ...).
struct ParameterError : Error { using Error::Error; };

// Argument outside the domain of a function (ω ≤ 0, t < 0, endpoint exponent too singular).
struct DomainError : Error { using Error::Error; };

struct ClassificationError : Error { using Error::Error; };

// Cat profile is not square-integrable.
struct IntegrabilityError : Error { using Error::Error; };

// Quadrature budget exhausted before the requested tolerance was reached.
struct ConvergenceError : Error { using Error::Error; };

// Cat normalization N below the degeneracy threshold.
struct DegenerateCatError : Error { using Error::Error; };

// Exponent of A± left [−700, 700].
struct SaturationError : Error { using Error::Error; };

struct UnsupportedSpectrum : Error { using Error::Error; };

struct EigenFailure : Error { using Error::Error; };

struct ParseError : Error { using Error::Error; };

struct ValidationError : Error { using Error::Error; };

struct IOError : Error { using Error::Error; };

}  // namespace qdeph

// error.hpp — Exception types shared by the nmcavity modules

#pragma once

#include <stdexcept>
#include <string>

namespace nmcavity {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ValidationKind {
    NonPositiveWidth,
    NegativeCoupling,
    NegativeSpectralDensity,
    InvalidInitialState,
    InvalidParameter,
};

inline const char* to_string(ValidationKind kind) {
    switch (kind) {
    case ValidationKind::NonPositiveWidth: return "NonPositiveWidth";
    case ValidationKind::NegativeCoupling: return "NegativeCoupling";
    case ValidationKind::NegativeSpectralDensity: return "NegativeSpectralDensity";
    case ValidationKind::InvalidInitialState: return "InvalidInitialState";
    case ValidationKind::InvalidParameter: return "InvalidParameter";
    }
    return "Unknown";
}

class ValidationError : public Error {
public:
    ValidationError(ValidationKind kind, const std::string& what)
        : Error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ValidationKind kind() const noexcept { return kind_; }

private:
    ValidationKind kind_;
};

// Raised by the NegativeSpectralDensity check; carries the offending frequency.
class NegativeSpectralDensity : public ValidationError {
public:
    NegativeSpectralDensity(double omega, double value)
        : ValidationError(ValidationKind::NegativeSpectralDensity,
                          "J(" + std::to_string(omega) + ") = " + std::to_string(value) + " < 0"),
          omega_(omega) {}

    double omega() const noexcept { return omega_; }

private:
    double omega_;
};

struct NumericalError : Error {
    using Error::Error;
};

struct QuadratureNonConvergence : NumericalError {
    using NumericalError::NumericalError;
};

struct StepSizeTooLarge : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace nmcavity

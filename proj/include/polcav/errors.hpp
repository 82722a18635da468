#ifndef POLCAV_ERRORS_HPP
#define POLCAV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polcav {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input failed a type or schema invariant. Carries the offending field/key.
class ValidationError : public Error {
public:
    ValidationError(std::string key, const std::string& detail)
        : Error("validation failed for '" + key + "': " + detail), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// Malformed structured input (JSON/CSV) before any semantic checks.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

// Anti-damping has pushed the total mechanical damping to zero or below.
class InstabilityError : public Error {
public:
    explicit InstabilityError(const std::string& what) : Error(what) {}
};

// Total optical damping does not change sign between the mode centers.
class NoCancellation : public Error {
public:
    explicit NoCancellation(const std::string& what) : Error(what) {}
};

// Spectrum has no qualifying local maximum above the noise floor.
class NoPeak : public Error {
public:
    explicit NoPeak(const std::string& what) : Error(what) {}
};

// Iterative fit hit its iteration cap with a diverging residual.
class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

// Fit succeeded numerically but the covariance is singular.
class DegenerateFit : public Error {
public:
    explicit DegenerateFit(const std::string& what) : Error(what) {}
};

// Ringdown series has no decaying component.
class NotDecaying : public Error {
public:
    explicit NotDecaying(const std::string& what) : Error(what) {}
};

// Polarization-ratio denominator is exactly zero.
class DivisionDegenerate : public Error {
public:
    explicit DivisionDegenerate(const std::string& what) : Error(what) {}
};

// Requested ratio lies outside the invertible range of the estimator.
class OutOfRange : public Error {
public:
    explicit OutOfRange(const std::string& what) : Error(what) {}
};

// Height-map file structure is broken (ragged rows, bad numbers, bad header).
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error(what) {}
};

// Height-map pitch metadata missing or unusable.
class UnitError : public Error {
public:
    explicit UnitError(const std::string& what) : Error(what) {}
};

// Radial line-cut leaves the raster.
class OutOfBounds : public Error {
public:
    explicit OutOfBounds(const std::string& what) : Error(what) {}
};

// Quadratic coefficient below the curvature detection threshold.
class FlatSurface : public Error {
public:
    explicit FlatSurface(const std::string& what) : Error(what) {}
};

// Cavity geometry fails the plano-concave stability bound.
class UnstableCavity : public Error {
public:
    explicit UnstableCavity(const std::string& what) : Error(what) {}
};

}  // namespace polcav

#endif

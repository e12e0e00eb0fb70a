#pragma once

#include <stdexcept>
#include <string>

namespace cra {

// Base for all library errors. CLI maps subtypes to exit codes:
// validation -> 2, bound violation -> 3, numerical pathology -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// Chain length N must be odd for the zero mode z = (N+1)/2 to exist.
class EvenChainLength : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A coupling required by the requested operation is zero (e.g. g0 = 0
// makes the swap time infinite).
class ZeroCoupling : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// The auxiliary tap site decouples from the zero mode (J_z = 0), so the
// reflection mechanism is absent.
class DegenerateTap : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Sweep grids must be strictly increasing with at least two points.
class GridNotIncreasing : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Eigensolver failed to converge.
class EigFailure : public Error {
public:
    using Error::Error;
};

// A quantity that must be real carries an imaginary residue above 1e-10.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

// A bound check failed; carries the first violating row.
class BoundViolated : public Error {
public:
    BoundViolated(std::string message, double vary_value, std::string column,
                  double sigma, double bound)
        : Error(std::move(message)),
          vary_value(vary_value),
          column(std::move(column)),
          sigma(sigma),
          bound(bound) {}

    double vary_value;
    std::string column;
    double sigma;
    double bound;
};

}  // namespace cra

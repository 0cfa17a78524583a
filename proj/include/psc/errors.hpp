#pragma once

#include <stdexcept>
#include <string>

namespace psc {

/// Bad user input: shapes, ranges, malformed files. CLI exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested rank exceeds what the data admits.
struct RankError : ValidationError {
    using ValidationError::ValidationError;
};

/// Malformed CSV/JSON input; message carries row/column location.
struct ParseError : ValidationError {
    using ValidationError::ValidationError;
};

/// Numerical failure during fitting or clustering. CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Soft thresholding removed every coefficient of a loading.
struct SparsityError : NumericalError {
    using NumericalError::NumericalError;
};

/// A component has zero score norm, so leverages are undefined.
struct DegenerateComponentError : NumericalError {
    using NumericalError::NumericalError;
};

/// A leverage reached 1 and the leave-one-out weight 1/(1-h) blew up.
struct LeverageSingularityError : NumericalError {
    using NumericalError::NumericalError;
};

/// No finite influence could be computed for some observation.
struct AssignmentError : NumericalError {
    using NumericalError::NumericalError;
};

/// The clustering loop could not maintain viable clusters.
struct ClusteringError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace psc

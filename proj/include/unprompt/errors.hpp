#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy for the whole toolkit. Everything derives from std::runtime_error
// (or invalid_argument for contract violations) so callers can catch coarsely;
// the CLI maps these onto exit codes (see tools/unprompt_main.cpp).

namespace unprompt {

// Shape disagreement between operands.
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Timestep outside [1, T].
struct TimestepOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Cholesky hit a non-positive pivot.
struct NotSpd : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rank-one downdate is singular (leverage too close to 1).
struct LeverageSingular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gradient requested from a tape node that is not a scalar.
struct NonScalarOutput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Loss evaluated to NaN/inf.
struct NonFiniteLoss : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad numeric range in a constructor argument (schedule bounds, penalty, sigma...).
struct InvalidRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed network architecture descriptor.
struct InvalidArch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Row edit that makes the closed-form ratio undefined.
struct DegenerateEdit : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Surrogate strategy applied to a dataset kind it does not support.
struct StrategyDatasetMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Two models that should share an architecture do not.
struct ArchMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Covariance eigendecomposition failed to converge.
struct CovarianceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File read/write failure; message carries path and byte offset where known.
struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Checkpoint written by an incompatible serializer version.
struct VersionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Checkpoint belongs to a different noise schedule than the active config.
struct ScheduleMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Referenced checkpoint file does not exist.
struct MissingCheckpoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config file unreadable or semantically invalid.
struct ConfigInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace unprompt

#pragma once

#include <stdexcept>
#include <string>

namespace asb {

/// Invalid user input: shape mismatches, non-finite values, bad parameters.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The request is well-formed but exceeds a hard implementation limit
/// (e.g. factorial permutation sums for large n).
struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite or otherwise unusable value.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An optimization loop diverged or failed to make progress.
struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace asb

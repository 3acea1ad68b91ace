#pragma once

#include <stdexcept>
#include <string>

namespace qtsf {

// Mathematical failure: a pole, a divide-by-zero, a violated structural
// assumption.  Maps to QTSF_EMATH across the C boundary.
struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller misuse: bad arguments, parse errors, out-of-range requests.
// Maps to QTSF_EUSAGE across the C boundary.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A rational function in the auxiliary variable still has a vanishing
// denominator at the target after all removable factors are cancelled.
struct PoleAtTarget : MathError {
    using MathError::MathError;
};

// The ratio theta_m(T) / (-s)^{ht T} differed between two tableaux of the
// same shape.  Never averaged over; always surfaced.
struct NonConstantRatio : MathError {
    using MathError::MathError;
};

}  // namespace qtsf

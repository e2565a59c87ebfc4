#pragma once

#include <stdexcept>

namespace wigflow {

/// Grid sizing or commensurability rejected at construction.
struct SizingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Two fields that must share a grid do not.
struct GridMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A state violates its normalization/orthonormality invariants.
struct StateError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A sampled state does not decay at the grid edge.
struct DecayError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A transform that must produce a real field left too large an imaginary residue.
struct RealnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A constructed field violates its type invariants (normalization, bound, ...).
struct FieldInvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An eigensolve did not converge or produced a degenerate discretization.
struct EigensolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wigflow

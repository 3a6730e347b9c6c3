#pragma once

#include <stdexcept>
#include <string>

namespace qlink {

/// Base class for everything thrown by this library. The CLI maps the
/// subtypes onto exit codes: configuration/usage problems -> 2, numerical
/// failures (truncation, non-convergence, singular limits) -> 3, violated
/// physical invariants -> 4.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mismatched mode counts, cutoffs, or matrix shapes.
struct dimension_error : error { using error::error; };

/// Argument outside its mathematical domain (negative lengths, q >= 1, ...).
struct domain_error : error { using error::error; };

/// Device matrices violate the energy-conservation constraint or basic shape
/// requirements.
struct invalid_device_error : error { using error::error; };

/// Device sits on a singular limit (fully absorbing / fully transmitting
/// channel) where the closed-form mode-transformation blocks are undefined.
struct degenerate_device_error : error { using error::error; };

/// Fock-space cutoff too small for the requested operation.
struct truncation_error : error { using error::error; };

/// Threshold formula evaluated in a parameter limit where it diverges.
struct singular_threshold_error : error { using error::error; };

/// State support does not fit the dimensions an algorithm can handle
/// (e.g. entanglement optimizers restricted to a two-qubit sector).
struct unsupported_dimension_error : error { using error::error; };

/// A quantity that must not increase under a physical map did.
struct invariant_violation : error { using error::error; };

/// File or serialization problems.
struct io_error : error { using error::error; };

} // namespace qlink

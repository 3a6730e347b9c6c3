#pragma once

#include "qlink/gaussian/state.hpp"

namespace qlink::gaussian {

/// Partial-transpose separability data for a two-mode Gaussian state. For
/// 1x1-mode bipartitions the PPT criterion is exact: the state is separable
/// iff the smallest symplectic eigenvalue of the momentum-flipped covariance
/// is >= 1/2.
struct SeparabilityResult {
    bool separable;
    double nu_min; ///< smallest symplectic eigenvalue after partial transpose
    double margin; ///< nu_min - 1/2; negative means entangled
};

SeparabilityResult is_separable_ppt(const GaussianState& state);

} // namespace qlink::gaussian

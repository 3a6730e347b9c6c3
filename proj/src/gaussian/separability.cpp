#include "qlink/gaussian/separability.hpp"

#include "qlink/errors.hpp"

namespace qlink::gaussian {

SeparabilityResult is_separable_ppt(const GaussianState& state) {
    state.validate();
    if (state.modes() != 2)
        throw dimension_error("PPT test implemented for two modes");
    // Partial transpose = momentum sign flip on the second mode.
    RMat f = RMat::Identity(4, 4);
    f(3, 3) = -1.0;
    const RMat cov_pt = f * state.cov * f;
    const RVec nus = symplectic_eigenvalues(cov_pt);
    SeparabilityResult r;
    r.nu_min = nus(0);
    r.margin = r.nu_min - 0.5;
    r.separable = r.margin >= 0.0;
    return r;
}

} // namespace qlink::gaussian

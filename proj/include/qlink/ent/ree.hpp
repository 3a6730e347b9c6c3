#pragma once

#include <cstdint>

#include "qlink/ent/report.hpp"
#include "qlink/fock/state.hpp"

namespace qlink::ent {

struct ReeOptions {
    int max_iterations = 3000;
    double gap_tolerance = 1e-6;       ///< duality-gap certificate target
    double objective_tolerance = 1e-9; ///< relative objective stall threshold
    uint64_t seed = 0x51e5u;           ///< seeds the product-state searches
};

/// Relative entropy of entanglement, min_{sigma in PPT} tr[rho (ln rho - ln
/// sigma)], in nats. The state is first compressed onto its local supports
/// (at most qubit x qubit, where PPT = separable, so the minimum is the
/// exact measure). Minimization runs over the PPT set by projected gradient
/// steps (Dykstra projection onto {PSD, tr=1} intersect {PT >= 0})
/// interleaved with Frank-Wolfe steps; the reported residual is the final
/// Frank-Wolfe duality gap, which certifies the distance to the optimum.
EntanglementReport relative_entropy_entanglement(
    const fock::DensityOperator& rho, const Bipartition& cut,
    const ReeOptions& opt = {});

} // namespace qlink::ent

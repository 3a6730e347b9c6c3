#pragma once

#include <cstdint>

#include "qlink/ent/report.hpp"
#include "qlink/ent/sector.hpp"
#include "qlink/fock/state.hpp"

namespace qlink::ent {

struct LsOptions {
    int restarts = 16;           ///< independent searches over the pure part
    int max_search_iterations = 500;
    double tol = 1e-10;          ///< simplex convergence tolerance
    uint64_t seed = 0xba11u;
};

/// Best separable approximation rho = lambda rho_sep + (1 - lambda) psi psi^dag
/// with maximal separable weight lambda. `entanglement` is the exact measure
/// (1 - lambda) * E(psi) built from the entropy of the optimal pure part.
/// `separable_part` and `pure_part` live in the compressed two-qubit sector
/// (see `sector`); `residual` is the largest PSD/PPT violation of the
/// certificate Q = rho - (1 - lambda) psi psi^dag.
struct LsResult {
    double lambda_max = 1.0;
    double entanglement = 0.0;
    bool converged = true;
    int iterations = 0;
    double residual = 0.0;
    Mat separable_part;
    Vec pure_part;
    QubitSector sector;
};

LsResult lewenstein_sanpera(const fock::DensityOperator& rho,
                            const Bipartition& cut, const LsOptions& opt = {});

} // namespace qlink::ent

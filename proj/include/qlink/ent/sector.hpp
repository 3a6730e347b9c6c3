#pragma once

#include <Eigen/Dense>

#include "qlink/ent/report.hpp"
#include "qlink/fock/state.hpp"

namespace qlink::ent {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// A state compressed onto the product of its local supports, each at most
/// two-dimensional. `rho` is (dim_left * dim_right) square with the right
/// factor fastest; `isometry` maps sector coordinates back to the full
/// register; `discarded` is the trace weight outside the sector (must be
/// negligible, it is not re-added).
struct QubitSector {
    Mat rho;
    Index dim_left = 0;
    Index dim_right = 0;
    Mat isometry;
    double discarded = 0.0;
};

/// Compress onto the local supports. Throws unsupported_dimension_error when
/// either marginal has rank > 2 (beyond the two-qubit optimizers) and
/// domain_error if significant weight (> 1e-8) lies outside the detected
/// sector.
QubitSector project_qubit_sector(const fock::DensityOperator& rho,
                                 const Bipartition& cut);

} // namespace qlink::ent

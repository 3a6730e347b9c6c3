#pragma once

#include "qlink/fock/state.hpp"
#include "qlink/gaussian/state.hpp"

namespace qlink::gaussian {

/// First and second quadrature moments of a Fock-basis density operator.
/// With centered ladder moments dE_ij = <da_i^dag da_j>, dF_ij = <da_i da_j>
/// (da = a - <a>):
///   Cov(x_i, x_j) =  Re dF_ij + Re dE_ij + delta_ij / 2
///   Cov(p_i, p_j) = -Re dF_ij + Re dE_ij + delta_ij / 2
///   Cov(x_i, p_j) =  Im dF_ij + Im dE_ij   (+ symmetrization)
/// and mean x_i = sqrt(2) Re<a_i>, mean p_i = sqrt(2) Im<a_i>.
/// This is exact for the truncated operator; for states far below the cutoff
/// it reproduces the untruncated moments.
GaussianState moments_from_fock(const fock::DensityOperator& rho);

} // namespace qlink::gaussian

#pragma once

#include "qlink/fock/state.hpp"
#include "qlink/kernels/exec.hpp"

namespace qlink::fock {

using kernels::Exec;

/// Tensor product; output layout = a.layout ++ b.layout.
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b,
                       Exec ex = kernels::default_exec());
FockState tensor(const FockState& a, const FockState& b,
                 Exec ex = kernels::default_exec());

/// Reduce onto `keep` (strictly increasing mode indices, nonempty, proper
/// subset or full set). Kept modes retain their original order.
DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const int> keep,
                              Exec ex = kernels::default_exec());

/// Reduced operator of a pure state without forming the full projector.
DensityOperator partial_trace(const FockState& psi, std::span<const int> keep,
                              Exec ex = kernels::default_exec());

/// Transpose the listed modes in the Fock basis.
DensityOperator partial_transpose(const DensityOperator& rho,
                                  std::span<const int> transposed,
                                  Exec ex = kernels::default_exec());

/// First and second ladder-operator moments of a state:
/// mean(i) = <a_i>, number(i,j) = <a_i^dag a_j>, pair(i,j) = <a_i a_j>.
/// Matrix elements that would reach past the cutoff are dropped, consistent
/// with the truncated operators themselves.
struct LadderMoments {
    Vec mean;
    Mat number;
    Mat pair;
};
LadderMoments ladder_moments(const DensityOperator& rho);

/// Population of the top Fock level of `mode` (diagonal mass with
/// occupation == cutoff), normalized by the trace.
double top_level_population(const DensityOperator& rho, int mode);

} // namespace qlink::fock

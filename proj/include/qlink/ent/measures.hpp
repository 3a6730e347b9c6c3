#pragma once

#include "qlink/ent/report.hpp"
#include "qlink/fock/factories.hpp"
#include "qlink/fock/state.hpp"
#include "qlink/fourport/channel.hpp"

namespace qlink::ent {

/// Von Neumann entropy of the reduced state on the left block (nats).
EntanglementReport reduced_entropy(const fock::FockState& psi,
                                   const Bipartition& cut);

/// Sum of the negative eigenvalues' magnitudes of the partial transpose.
EntanglementReport negativity(const fock::DensityOperator& rho,
                              const Bipartition& cut);

/// ln of the trace norm of the partial transpose, ln(1 + 2 negativity).
EntanglementReport log_negativity(const fock::DensityOperator& rho,
                                  const Bipartition& cut);

/// Closed-form upper bounds on the relative entropy of entanglement of a
/// Bell state sent through two identical fibers of intensity transmission
/// t_sq = |T|^2:
///   single-excitation family:  t_sq ln 2
///   vacuum-bright family:      (1/2)[(1 + t_sq) ln(1 + t_sq) - t_sq ln t_sq]
double bell_output_bound(fock::BellKind kind, double t_sq);

/// Evaluate a measure before and after a channel and verify it did not
/// increase beyond `tol`. Returns (before, after); throws
/// invariant_violation on increase.
std::pair<EntanglementReport, EntanglementReport> monotonicity_check(
    const fock::DensityOperator& input, const Bipartition& cut,
    const fourport::DeviceSpec& spec, const fourport::ChannelOptions& opt,
    Measure measure, double tol);

} // namespace qlink::ent

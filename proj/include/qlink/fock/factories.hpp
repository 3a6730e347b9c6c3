#pragma once

#include "qlink/fock/state.hpp"

namespace qlink::fock {

/// The four maximally entangled single-photon states on two modes:
/// psi_{+,-} = (|01> +- |10>)/sqrt(2), phi_{+,-} = (|00> +- |11>)/sqrt(2).
enum class BellKind { psi_plus, psi_minus, phi_plus, phi_minus };

/// True for the psi (single-excitation) family.
constexpr bool is_psi_family(BellKind k) {
    return k == BellKind::psi_plus || k == BellKind::psi_minus;
}

/// Relative sign between the two branches (+1 for plus states).
constexpr double bell_sign(BellKind k) {
    return (k == BellKind::psi_plus || k == BellKind::phi_plus) ? 1.0 : -1.0;
}

/// Bell state over a two-mode layout (any cutoffs >= 1).
FockState make_bell_state(BellKind kind, const ModeLayout& layout);

/// Two-mode squeezed vacuum truncated to a layout. Amplitudes are
/// proportional to q^n on |nn> with q = tanh(zeta) in (-1, 1); the state is
/// renormalized and the weight lost to truncation is reported.
struct TmsvState {
    FockState state;
    double truncation_weight; ///< probability mass beyond the cutoff, before renormalization
};
TmsvState make_tmsv(double q, const ModeLayout& layout);

/// |0...0> over a layout.
FockState make_vacuum(const ModeLayout& layout);

/// Basis state for a given occupation tuple.
FockState make_basis_state(const ModeLayout& layout, std::span<const int> occ);

/// Copy a state into a layout with mode-wise equal-or-larger cutoffs.
FockState embed(const FockState& psi, const ModeLayout& larger);
DensityOperator embed(const DensityOperator& rho, const ModeLayout& larger);

} // namespace qlink::fock

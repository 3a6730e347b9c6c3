#pragma once

#include "qlink/fock/state.hpp"
#include "qlink/fourport/lambda.hpp"
#include "qlink/kernels/exec.hpp"

namespace qlink::fourport {

using fock::DensityOperator;
using fock::FockState;
using fock::ModeLayout;
using kernels::Exec;

struct ChannelOptions {
    int device_cutoff = 6;
    /// Budget for probability lost to finite cutoffs. Exceeding it on the
    /// thermal device tail, or on the field register of an amplifier, throws
    /// truncation_error.
    double truncation_tol = 1e-6;
    Exec exec = kernels::default_exec();
};

struct ChannelReport {
    /// Thermal-device probability mass beyond the device cutoff (both modes).
    double device_truncation_weight = 0.0;
    /// Largest top-Fock-level population among the output field modes.
    double field_top_population = 0.0;
    /// Largest top-level population among the device modes after the unitary.
    double device_top_population = 0.0;
    /// 1 - Re tr(rho_out); nonzero only through floating-point drift because
    /// each block of the dilation is exactly unitary.
    double trace_delta = 0.0;
};

struct ChannelResult {
    DensityOperator state;
    ChannelReport report;
};

/// Apply the device channel: adjoin thermal device modes, evolve with the
/// dilation unitary of the mode transformation, trace the device out.
ChannelResult apply_channel(const DensityOperator& input, const DeviceSpec& spec,
                            const ChannelOptions& opt = {});

/// Pure-input fast path. For n_th = 0 this evolves a single state vector;
/// for n_th > 0 it averages over device Fock states. Output is the reduced
/// field density operator either way.
ChannelResult apply_channel(const FockState& input, const DeviceSpec& spec,
                            const ChannelOptions& opt = {});

/// Truncated geometric (thermal) single-mode populations and the weight of
/// the discarded tail.
struct ThermalPopulations {
    Eigen::VectorXd probs;
    double truncation_weight;
};
ThermalPopulations thermal_populations(int cutoff, double n_th);

} // namespace qlink::fourport

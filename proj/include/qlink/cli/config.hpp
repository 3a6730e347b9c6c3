#pragma once

#include <optional>
#include <string>

#include "qlink/io/json_io.hpp"

namespace qlink::cli {

/// Resolved sweep grid: `steps` evenly spaced points from `start` to `stop`
/// inclusive.
struct GridSpec {
    double start = 0.0;
    double stop = 1.0;
    int steps = 2;

    double point(int i) const {
        return start + (stop - start) * static_cast<double>(i) /
                           static_cast<double>(steps - 1);
    }
};

/// One experiment run: which sweep to perform and every knob it accepts.
/// Fields left unset fall back to per-experiment defaults in resolve().
/// Accepted experiments: bell-decay, tmsv-separability, amplifier-gain,
/// channel-apply.
struct SweepConfig {
    std::string experiment;

    std::optional<double> grid_start;
    std::optional<double> grid_stop;
    std::optional<int> grid_steps;

    /// Bell sign family for bell-decay: "plus" (|Psi+>, |Phi+>) or "minus".
    std::string kind = "plus";
    /// Two-mode squeezing parameter for the Gaussian sweeps.
    double zeta = 0.5;
    /// Thermal occupation of the device modes.
    std::optional<double> n_th;

    /// +1 absorber, -1 amplifier. 0 = per-experiment default.
    int sigma = 0;
    /// Reflection magnitude used by the closed-form threshold comparisons.
    double reflection = 0.0;
    /// Highest retained Fock occupation per field / device mode.
    std::optional<int> field_cutoff;
    std::optional<int> device_cutoff;

    /// Entanglement measure for bell-decay columns:
    /// ree | negativity | log-negativity | ls.
    std::string measure = "ree";

    /// channel-apply inputs.
    std::string input_path;
    std::string device_path;

    std::string out_path; ///< empty = stdout
    std::string format = "csv";
    bool verify = false;

    /// Grid with experiment defaults applied.
    GridSpec grid() const;
    /// n_th with experiment defaults applied.
    double n_th_value() const;
    /// sigma with experiment defaults applied.
    int sigma_value() const;
    int field_cutoff_value() const;
    int device_cutoff_value() const;

    /// Domain checks for the chosen experiment; throws domain_error with a
    /// config-prefixed message on violation.
    void validate() const;
};

/// Read a config JSON object into `cfg`, overwriting only the keys present.
/// Unknown keys are rejected (typos must not pass silently). Keys mirror the
/// command-line flags: experiment, grid_start, grid_stop, grid_steps, kind,
/// zeta, n_th, sigma, reflection, field_cutoff, device_cutoff, measure,
/// input, device, out, format, verify.
void merge_config_json(SweepConfig& cfg, const io::json& j);

/// Load and merge a config file. Throws io_error on unreadable/unparsable
/// files and domain_error on unknown keys or wrong value types.
void load_config_file(SweepConfig& cfg, const std::string& path);

} // namespace qlink::cli

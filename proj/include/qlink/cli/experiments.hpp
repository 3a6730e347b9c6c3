#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qlink/cli/config.hpp"

namespace qlink::cli {

/// Sweep result: a versioned schema tag, named numeric columns, one row per
/// grid point, plus scalar summary values (crossings, closed-form references)
/// and free-form notes. CSV and JSON writers emit exactly this content.
struct Table {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, double>> summary;
    std::vector<std::pair<std::string, std::string>> notes;
};

/// Fixed 12-significant-digit rendering ("%.12g"); the reason identical
/// configs produce byte-identical CSV output.
std::string format_g12(double v);

/// Layout: "# schema <tag>" comment, header row, data rows, then summary and
/// note lines as "# <key> <value>" comments.
void write_csv(const Table& t, std::ostream& os);

/// JSON mirror of the CSV content.
io::json table_to_json(const Table& t);

/// Entanglement decay of the one-photon Bell families through two equal
/// absorbing fibers, measured by cfg.measure, with the closed-form
/// convexity bounds alongside. Columns carry both nats and ln2-normalized
/// values.
Table run_bell_decay(const SweepConfig& cfg);

/// PPT margin of a two-mode squeezed vacuum after two equal thermal fibers,
/// swept over l/L, with the detected separability crossing checked against
/// the closed-form maximal fiber length.
Table run_tmsv_separability(const SweepConfig& cfg);

/// PPT margin of a two-mode squeezed vacuum through two equal phase-
/// insensitive amplifiers, swept over the intensity gain |T|^2, with the
/// crossing checked against the closed-form maximal gain.
Table run_amplifier_gain(const SweepConfig& cfg);

/// Apply the device channel of a DeviceSpec file to a state file (Fock pure,
/// Fock density, or two-mode Gaussian). Returns the transformed state JSON
/// with truncation/leakage metadata under "leakage" and the engine used
/// under "channel".
io::json run_channel_apply(const SweepConfig& cfg);

} // namespace qlink::cli

#pragma once

#include <string>

#include <json.hpp>

#include "qlink/ent/report.hpp"
#include "qlink/fock/state.hpp"
#include "qlink/fourport/device.hpp"
#include "qlink/gaussian/state.hpp"

namespace qlink::io {

using nlohmann::json;

/// Complex numbers serialize as [re, im]; matrices as row-major nested
/// arrays. Fock objects carry their layout as "cutoffs"; amplitudes and
/// matrix entries follow the row-major basis enumeration of ModeLayout.

json to_json(const fock::FockState& psi);
fock::FockState fock_state_from_json(const json& j);

json to_json(const fock::DensityOperator& rho);
fock::DensityOperator density_from_json(const json& j);

/// DeviceSpec: {"sigma": +-1, "n_th": x, "T": [[..]], "A": [[..]]?}. A may be
/// omitted; it is then completed as the PSD square root of
/// sigma (I - T T^dag), and the input is rejected when that is not PSD.
json to_json(const fourport::DeviceSpec& spec);
fourport::DeviceSpec device_from_json(const json& j);

json to_json(const gaussian::GaussianState& g);
gaussian::GaussianState gaussian_from_json(const json& j);

json to_json(const ent::EntanglementReport& rep);

/// Kind of serialized state found in a JSON document.
enum class StateKind { fock_pure, fock_density, gaussian_moments };
StateKind detect_state_kind(const json& j);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

} // namespace qlink::io

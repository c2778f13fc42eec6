#pragma once

#include <string>

#include <json.hpp>

#include "dampedmodes/medium.hpp"

namespace dampedmodes {

/// Configuration file schema (all keys required unless noted, unknown keys rejected):
///
///   {
///     "mu0": 1.0,
///     "cell_A": { "layers": [ { "eps_re": 1, "eps_im_coeff": 1, "width": 0.25 }, ... ] },
///     "cell_B": { "layers": [ ... ] },
///     "delta": 0.0                      // optional, defaults to 0
///   }
///
/// Throws ConfigError on malformed input. Structural checks (width sum,
/// symmetry) are left to validate_cell.
InterfaceMedium medium_from_json(const nlohmann::json& j);
InterfaceMedium load_medium(const std::string& path);

nlohmann::json to_json(const InterfaceMedium& medium);

}  // namespace dampedmodes

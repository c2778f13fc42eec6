#include "dampedmodes/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "dampedmodes/errors.hpp"

namespace dampedmodes {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number_field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("key '" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

UnitCell cell_from_json(const json& j, const std::string& label) {
  const std::string where = "cell_" + label;
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown(j, {"layers"}, where);
  if (!j.contains("layers") || !j.at("layers").is_array()) {
    throw ConfigError(where + ".layers must be an array");
  }
  UnitCell cell;
  cell.label = label;
  std::size_t i = 0;
  for (const auto& lj : j.at("layers")) {
    const std::string lwhere = where + ".layers[" + std::to_string(i++) + "]";
    if (!lj.is_object()) throw ConfigError(lwhere + " must be an object");
    reject_unknown(lj, {"eps_re", "eps_im_coeff", "width"}, lwhere);
    cell.layers.push_back({number_field(lj, "eps_re", lwhere), number_field(lj, "eps_im_coeff", lwhere),
                           number_field(lj, "width", lwhere)});
  }
  return cell;
}

}  // namespace

InterfaceMedium medium_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  reject_unknown(j, {"mu0", "cell_A", "cell_B", "delta"}, "configuration");
  InterfaceMedium m;
  m.mu0 = number_field(j, "mu0", "configuration");
  if (!(m.mu0 > 0.0)) throw ConfigError("mu0 must be positive");
  if (!j.contains("cell_A")) throw ConfigError("missing key 'cell_A'");
  if (!j.contains("cell_B")) throw ConfigError("missing key 'cell_B'");
  m.cell_a = cell_from_json(j.at("cell_A"), "A");
  m.cell_b = cell_from_json(j.at("cell_B"), "B");
  if (j.contains("delta")) {
    m.delta = number_field(j, "delta", "configuration");
    if (!(m.delta >= 0.0)) throw ConfigError("delta must be nonnegative");
  }
  return m;
}

InterfaceMedium load_medium(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("JSON parse error: ") + e.what());
  }
  return medium_from_json(j);
}

nlohmann::json to_json(const InterfaceMedium& medium) {
  auto cell = [](const UnitCell& c) {
    json layers = json::array();
    for (const auto& l : c.layers) {
      layers.push_back({{"eps_re", l.eps_re}, {"eps_im_coeff", l.eps_im_coeff}, {"width", l.width}});
    }
    return json{{"layers", layers}};
  };
  return json{{"mu0", medium.mu0}, {"cell_A", cell(medium.cell_a)}, {"cell_B", cell(medium.cell_b)},
              {"delta", medium.delta}};
}

}  // namespace dampedmodes

#include "wr/harness/materials.hpp"

#include "wr/errors.hpp"

#include <cmath>
#include <map>

namespace wr {

namespace {

const std::map<std::string, Material>& table() {
    static const std::map<std::string, Material> materials{
        {"air", {1.293 * 1005.0, 0.0243}},
        {"water", {999.7 * 4192.1, 0.58}},
        {"steel", {7836.0 * 443.0, 48.9}},
    };
    return materials;
}

}  // namespace

const Material& MaterialRegistry::get(const std::string& name) {
    const auto it = table().find(name);
    if (it == table().end()) throw ConfigError("unknown material '" + name + "'");
    return it->second;
}

bool MaterialRegistry::contains(const std::string& name) { return table().count(name) > 0; }

std::vector<std::string> MaterialRegistry::names() {
    std::vector<std::string> out;
    for (const auto& [name, material] : table()) out.push_back(name);
    return out;
}

std::pair<Material, Material> MaterialRegistry::pair(const std::string& spec) {
    const auto dash = spec.find('-');
    if (dash == std::string::npos) throw ConfigError("material pair must look like 'air-steel', got '" + spec + "'");
    return {get(spec.substr(0, dash)), get(spec.substr(dash + 1))};
}

std::pair<int, int> cfl_step_ratio(const Material& m1, const Material& m2) {
    m1.validate();
    m2.validate();
    const double d1 = m1.diffusivity();
    const double d2 = m2.diffusivity();
    if (d2 >= d1) return {1, static_cast<int>(std::floor(d2 / d1))};
    return {static_cast<int>(std::floor(d1 / d2)), 1};
}

}  // namespace wr

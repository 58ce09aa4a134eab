#pragma once

#include "wr/fem_core.hpp"

#include <string>
#include <utility>
#include <vector>

namespace wr {

/// Built-in materials: air, water and steel.
class MaterialRegistry {
public:
    static const Material& get(const std::string& name);
    static bool contains(const std::string& name);
    static std::vector<std::string> names();

    /// "air-steel" -> (air, steel)
    static std::pair<Material, Material> pair(const std::string& spec);
};

/// Integer stepsize multipliers (c1, c2) matching the CFL numbers of both
/// subdomains: the more diffusive side gets floor(D_fast / D_slow) steps per
/// base step, the other side one.
std::pair<int, int> cfl_step_ratio(const Material& m1, const Material& m2);

}  // namespace wr

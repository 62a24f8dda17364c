#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sweep/vec.hpp"

#include "json.hpp"

namespace sweep {

using ordered_json = nlohmann::ordered_json;

/// Registry entry: a named, fully configured problem plus optional
/// closed-form reference solution for convergence checks.
struct Scenario {
    std::string name;
    std::string description;
    std::vector<std::string> tags;
    std::size_t dim = 1;
    ordered_json config;                 // canonical problem/grid/iteration block
    std::function<Vec(double)> exact;    // null when no closed form is known
};

const std::vector<Scenario>& scenario_registry();

/// Null when the name is unknown.
const Scenario* find_scenario(std::string_view name);

}  // namespace sweep

#pragma once

#include "json.hpp"

#include <string>

namespace geoext {

// Deterministic JSON text: keys sorted, floats as %.17g, two-space indent.
std::string dump_json(const nlohmann::json& j);

}  // namespace geoext

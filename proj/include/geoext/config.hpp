#pragma once

#include "geoext/model.hpp"

namespace geoext {

using Overrides = std::map<std::string, std::string>;

// Parses a format-1 TOML system description. Overrides replace [params] or
// [define] entries by name; an unknown name is an unknown_parameter error.
SystemModel parse_config(const std::string& text, const Overrides& overrides = {});
SystemModel parse_config_file(const std::string& path, const Overrides& overrides = {});

FramedSystem load_system(const std::string& text, const Overrides& overrides = {});
FramedSystem load_system_file(const std::string& path, const Overrides& overrides = {});

}  // namespace geoext

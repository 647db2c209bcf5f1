#pragma once

#include "nadir/scenario.hpp"

#include <string>
#include <vector>

namespace nadir {

std::vector<std::string> preset_names();
// Raw embedded document; throws ParameterError naming the available presets.
nlohmann::json preset_document(const std::string& name);
Scenario load_preset(const std::string& name);
std::string preset_checksum(const std::string& name);

}  // namespace nadir

#pragma once

#include <string>
#include <vector>

namespace spincond {

// Built-in experiment presets (also shipped as files under presets/).
std::vector<std::string> preset_names();
const std::string& preset_text(const std::string& name);

}  // namespace spincond

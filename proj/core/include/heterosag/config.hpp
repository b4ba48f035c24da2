#pragma once

#include <string>
#include <unordered_map>

#include "heterosag/sim.hpp"

namespace heterosag {

/// key = value configuration text, '#' comments. Unknown keys are an error.
/// See the README for the full schema.
RoundConfig parse_config_text(const std::string& text);
RoundConfig load_config_file(const std::string& path);

/// Applies "key=value" command-line overrides on top of a parsed config.
void apply_override(RoundConfig& config, const std::string& assignment);

}  // namespace heterosag

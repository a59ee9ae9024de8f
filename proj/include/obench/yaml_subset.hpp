#pragma once

#include <string>

#include <json.hpp>

namespace obench {

/// Parses a single YAML document restricted to mappings, sequences and scalars.
/// Anchors, aliases, tags and duplicate keys are rejected. Plain scalars become
/// null, booleans, integers or floats where they read as such; quoted scalars
/// stay strings.
nlohmann::json parse_yaml_subset(const std::string& text);

}  // namespace obench

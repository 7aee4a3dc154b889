#pragma once

#include "dyadic/grid.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace dyadic {

/// Signal file layout:
///   {"mesh_exponent": int, "origin": [int...], "extent": [int...],
///    "value_dim": int, "values": [num...]}   (values row-major)
nlohmann::json signal_to_json(const GridFunction& f);
GridFunction signal_from_json(const nlohmann::json& j);

/// Parses signal text; parse failures report the byte offset.
GridFunction parse_signal(std::string_view text);
GridFunction read_signal_file(const std::string& path);
void write_signal_file(const GridFunction& f, const std::string& path);

} // namespace dyadic

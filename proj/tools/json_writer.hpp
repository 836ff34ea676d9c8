#pragma once

#include <string>

#include <json.hpp>

namespace tju::cli {

/// Scientific notation with 12 significant digits, independent of locale.
std::string format_number(double value);

/// Serialises JSON with floats in format_number style and a two-space indent.
std::string to_json_text(const nlohmann::ordered_json &value);

} // namespace tju::cli

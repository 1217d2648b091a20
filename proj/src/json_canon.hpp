#pragma once

#include <string>

#include <json.hpp>

#include "havmon/io.hpp"

// Library-private helpers shared by the config loader, the report codec,
// and the simulate manifest writer.
namespace havmon::detail {

// Canonical JSON: keys in sorted order (the default nlohmann object is
// backed by std::map), numbers at 15 significant digits, non-finite numbers
// as the strings "Infinity" / "-Infinity" / "NaN" so the document stays
// valid JSON. Canonical bytes define report equality.
std::string canonical_dump(const nlohmann::json& j);

// Reads a number that canonical_dump may have written as a string.
double json_number(const nlohmann::json& v);

// Strict: unknown keys anywhere are a ParseError naming the key.
AnalysisConfig config_from_json(const nlohmann::json& j, const std::string& origin);
nlohmann::json config_to_json(const AnalysisConfig& cfg);

}  // namespace havmon::detail

#pragma once

// Shared JSON helpers for loaders and persistence. Internal to the library.

#include <string>

#include "json.hpp"
#include "riskrank/situation.hpp"

namespace riskrank::detail {

nlohmann::json situation_to_json(const OntologySet& ontologies, const Situation& s);
Situation situation_from_json(const OntologySet& ontologies, const nlohmann::json& j);

// Parse with a contextual error message instead of nlohmann's exception.
nlohmann::json parse_json(const std::string& text, const std::string& origin);
nlohmann::json load_json_file(const std::string& path, const std::string& what);

}  // namespace riskrank::detail

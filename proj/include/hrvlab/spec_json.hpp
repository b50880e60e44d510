#pragma once

#include "json.hpp"

#include "hrvlab/generators.hpp"

namespace hrvlab {

// JSON forms of scalar laws, angular laws and generator specs. Layout is
// documented in schema/generator_spec.schema.json. Parsing errors raise
// ConfigError naming the offending field.

nlohmann::json to_json(const ScalarLaw& l);
nlohmann::json to_json(const AngularLawE& a);
nlohmann::json to_json(const HiddenAngularSpec& s);
nlohmann::json to_json(const GeneratorSpec& spec);

ScalarLaw scalar_law_from_json(const nlohmann::json& j);
AngularLawE angular_law_from_json(const nlohmann::json& j);
HiddenAngularSpec hidden_angular_from_json(const nlohmann::json& j);
GeneratorSpec spec_from_json(const nlohmann::json& j);

}  // namespace hrvlab

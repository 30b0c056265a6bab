#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace stresskit {

// Validates a JSON value against a small, deliberately closed subset of
// JSON Schema: type (string or list), enum, properties, required,
// additionalProperties (bool or schema), and items (single schema).
// $schema, title, description, and $comment are allowed as annotations.
// Returns one human-readable message per violation ("<path>: <problem>");
// an empty result means the value conforms. A schema that strays outside
// the subset throws config_error, so the shipped schemas cannot silently
// rely on keywords this validator ignores.
std::vector<std::string> schema_violations(const nlohmann::json& schema,
                                           const nlohmann::json& value);

// Text of a schema shipped with the tool (embedded at build time from
// the schemas/ directory), keyed by file name, e.g. "run_config". Throws
// config_error for an unknown name.
const std::string& schema_text(const std::string& name);

// Parsed shipped schema.
nlohmann::json shipped_schema(const std::string& name);

}  // namespace stresskit

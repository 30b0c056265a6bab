#include "stresskit/jsonschema.hpp"

#include <cmath>
#include <map>
#include <set>

#include "stresskit/error.hpp"

namespace stresskit {

// Generated at build time from schemas/*.schema.json.
const std::map<std::string, std::string>& embedded_schema_texts();

namespace {

const std::set<std::string> kKnownKeywords = {
    "type",     "enum",  "properties", "required", "additionalProperties",
    "items",    "$schema", "title",    "description", "$comment"};

bool matches_type(const std::string& type, const nlohmann::json& v) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer() || v.is_number_unsigned()) return true;
    if (v.is_number_float()) {
      const double d = v.get<double>();
      return std::isfinite(d) && d == std::trunc(d);
    }
    return false;
  }
  throw config_error("schema: unknown type \"" + type + "\"");
}

std::string json_type_name(const nlohmann::json& v) {
  switch (v.type()) {
    case nlohmann::json::value_t::object: return "object";
    case nlohmann::json::value_t::array: return "array";
    case nlohmann::json::value_t::string: return "string";
    case nlohmann::json::value_t::boolean: return "boolean";
    case nlohmann::json::value_t::null: return "null";
    default: return "number";
  }
}

void check(const nlohmann::json& schema, const nlohmann::json& value,
           const std::string& path, std::vector<std::string>& out) {
  if (!schema.is_object()) {
    throw config_error("schema: every schema node must be an object");
  }
  for (const auto& item : schema.items()) {
    if (!kKnownKeywords.count(item.key())) {
      throw config_error("schema: unsupported keyword \"" + item.key() +
                         "\" at " + (path.empty() ? "$" : path));
    }
  }
  const std::string where = path.empty() ? "$" : path;

  if (schema.contains("type")) {
    const auto& t = schema.at("type");
    bool ok = false;
    if (t.is_string()) {
      ok = matches_type(t.get<std::string>(), value);
    } else if (t.is_array()) {
      for (const auto& alt : t) {
        if (matches_type(alt.get<std::string>(), value)) {
          ok = true;
          break;
        }
      }
    } else {
      throw config_error("schema: type must be a string or list");
    }
    if (!ok) {
      out.push_back(where + ": expected type " + t.dump() + ", got " +
                    json_type_name(value));
      return;  // further keyword checks would only echo the mismatch
    }
  }

  if (schema.contains("enum")) {
    const auto& options = schema.at("enum");
    if (!options.is_array()) {
      throw config_error("schema: enum must be a list");
    }
    bool ok = false;
    for (const auto& alt : options) {
      if (alt == value) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      out.push_back(where + ": value " + value.dump() + " not one of " +
                    options.dump());
    }
  }

  if (value.is_object()) {
    const nlohmann::json empty_obj = nlohmann::json::object();
    const auto& props =
        schema.contains("properties") ? schema.at("properties") : empty_obj;
    if (!props.is_object()) {
      throw config_error("schema: properties must be an object");
    }
    if (schema.contains("required")) {
      for (const auto& name : schema.at("required")) {
        if (!value.contains(name.get<std::string>())) {
          out.push_back(where + ": missing required key \"" +
                        name.get<std::string>() + "\"");
        }
      }
    }
    for (const auto& item : value.items()) {
      const std::string child_path = where + "." + item.key();
      if (props.contains(item.key())) {
        check(props.at(item.key()), item.value(), child_path, out);
      } else if (schema.contains("additionalProperties")) {
        const auto& extra = schema.at("additionalProperties");
        if (extra.is_boolean()) {
          if (!extra.get<bool>()) {
            out.push_back(where + ": unknown key \"" + item.key() + "\"");
          }
        } else {
          check(extra, item.value(), child_path, out);
        }
      }
    }
  }

  if (value.is_array() && schema.contains("items")) {
    const auto& items = schema.at("items");
    for (std::size_t i = 0; i < value.size(); ++i) {
      check(items, value[i], where + "[" + std::to_string(i) + "]", out);
    }
  }
}

}  // namespace

std::vector<std::string> schema_violations(const nlohmann::json& schema,
                                           const nlohmann::json& value) {
  std::vector<std::string> out;
  check(schema, value, "", out);
  return out;
}

const std::string& schema_text(const std::string& name) {
  const auto& texts = embedded_schema_texts();
  const auto it = texts.find(name);
  if (it == texts.end()) {
    throw config_error("unknown schema \"" + name + "\"");
  }
  return it->second;
}

nlohmann::json shipped_schema(const std::string& name) {
  return nlohmann::json::parse(schema_text(name));
}

}  // namespace stresskit

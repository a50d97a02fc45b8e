#pragma once

// Minimal JSON-schema validator covering the subset the shipped schemas use:
// type, required, properties, additionalProperties:false, items, minItems,
// enum, minimum, maximum, exclusiveMinimum. Violations throw
// std::invalid_argument naming the offending field.

#include <stdexcept>
#include <string>

#include "json.hpp"

namespace degma::cli {

inline void validate_schema(const nlohmann::json& value, const nlohmann::json& schema,
                            const std::string& path = "config") {
  using nlohmann::json;

  if (schema.contains("type")) {
    const std::string t = schema.at("type").get<std::string>();
    bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
              (t == "number" && value.is_number()) ||
              (t == "integer" && value.is_number_integer()) ||
              (t == "string" && value.is_string()) || (t == "boolean" && value.is_boolean());
    if (!ok) throw std::invalid_argument(path + ": expected " + t);
  }

  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema.at("enum"))
      if (e == value) found = true;
    if (!found) throw std::invalid_argument(path + ": value not in allowed set");
  }

  if (value.is_number()) {
    const double v = value.get<double>();
    if (schema.contains("minimum") && v < schema.at("minimum").get<double>())
      throw std::invalid_argument(path + ": below minimum " + schema.at("minimum").dump());
    if (schema.contains("exclusiveMinimum") && v <= schema.at("exclusiveMinimum").get<double>())
      throw std::invalid_argument(path + ": must exceed " + schema.at("exclusiveMinimum").dump());
    if (schema.contains("maximum") && v > schema.at("maximum").get<double>())
      throw std::invalid_argument(path + ": above maximum " + schema.at("maximum").dump());
  }

  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& k : schema.at("required")) {
        const std::string key = k.get<std::string>();
        if (!value.contains(key))
          throw std::invalid_argument(path + ": missing required field '" + key + "'");
      }
    const json props = schema.value("properties", json::object());
    const bool closed =
        schema.contains("additionalProperties") && schema.at("additionalProperties") == false;
    for (const auto& [key, sub] : value.items()) {
      if (props.contains(key))
        validate_schema(sub, props.at(key), path + "." + key);
      else if (closed)
        throw std::invalid_argument(path + ": unknown field '" + key + "'");
    }
  }

  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema.at("minItems").get<std::size_t>())
      throw std::invalid_argument(path + ": needs at least " + schema.at("minItems").dump() +
                                  " items");
    if (schema.contains("items")) {
      std::size_t k = 0;
      for (const auto& e : value) {
        validate_schema(e, schema.at("items"), path + "[" + std::to_string(k) + "]");
        ++k;
      }
    }
  }
}

}  // namespace degma::cli

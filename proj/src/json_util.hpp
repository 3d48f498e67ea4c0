#pragma once

#include <string>

#include <json.hpp>

#include "clscad/error.hpp"

namespace clscad::detail {

inline const nlohmann::json& field(const nlohmann::json& obj, const char* key, const char* what) {
  if (!obj.is_object()) throw Error(ErrorCode::SchemaViolation, std::string(what) + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end())
    throw Error(ErrorCode::SchemaViolation, std::string(what) + " lacks \"" + key + "\"");
  return *it;
}

inline std::string string_field(const nlohmann::json& obj, const char* key, const char* what) {
  const auto& v = field(obj, key, what);
  if (!v.is_string())
    throw Error(ErrorCode::SchemaViolation, std::string(what) + "." + key + " must be a string");
  return v.get<std::string>();
}

inline const nlohmann::json& array_field(const nlohmann::json& obj, const char* key, const char* what) {
  const auto& v = field(obj, key, what);
  if (!v.is_array())
    throw Error(ErrorCode::SchemaViolation, std::string(what) + "." + key + " must be an array");
  return v;
}

inline std::string as_string(const nlohmann::json& v, const char* what) {
  if (!v.is_string()) throw Error(ErrorCode::SchemaViolation, std::string(what) + " must be a string");
  return v.get<std::string>();
}

}  // namespace clscad::detail

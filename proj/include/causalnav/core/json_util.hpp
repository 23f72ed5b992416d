#pragma once

#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

#include <json.hpp>

#include "causalnav/core/error.hpp"

namespace causalnav::jsonutil {

using Json = nlohmann::json;

inline std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}
inline std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw DocumentError(path, "expected an object");
}

// Rejects keys outside `allowed`; documents are strict so typos surface.
inline void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  require_object(j, path);
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw DocumentError(child(path, it.key()), "unknown key");
}

inline const Json& field(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DocumentError(child(path, key), "missing required field");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw DocumentError(path, "expected a number");
  return j.get<double>();
}

inline long long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw DocumentError(path, "expected an integer");
  return j.get<long long>();
}

inline std::string string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw DocumentError(path, "expected a string");
  return j.get<std::string>();
}

inline double number_or(const Json& j, const std::string& path, const char* key, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, child(path, key));
}

inline Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DocumentError(origin, std::string("malformed document: ") + e.what());
  }
}

inline Json read_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw DocumentError(file, "cannot open file");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_text(text, file);
}

inline void write_file(const std::string& file, const Json& j) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file);
  out << j.dump(2) << '\n';
}

}  // namespace causalnav::jsonutil

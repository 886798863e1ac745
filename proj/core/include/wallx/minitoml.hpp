#pragma once
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "wallx/errors.hpp"

namespace wallx {

// Strict reader for the configuration subset we accept: [section] headers,
// integer and boolean scalars, and (nested) integer arrays. Anything else is
// rejected. Floats are rejected by design: inputs must be exact.
struct TomlValue {
  enum Kind { IntK, BoolK, IntListK, IntMatK } kind;
  long long i = 0;
  bool b = false;
  std::vector<long long> list;
  std::vector<std::vector<long long>> mat;
};

class TomlDoc {
 public:
  static TomlDoc parse_file(const std::string& path);
  static TomlDoc parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key, long long dflt) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool dflt) const;
  std::vector<long long> get_int_list(const std::string& section, const std::string& key) const;
  std::vector<std::vector<long long>> get_int_mat(const std::string& section,
                                                  const std::string& key) const;
  // All keys present under a section (sorted).
  std::vector<std::string> keys(const std::string& section) const;

 private:
  const TomlValue& fetch(const std::string& section, const std::string& key) const;
  std::map<std::string, TomlValue> kv_;  // "section.key" -> value
};

}  // namespace wallx

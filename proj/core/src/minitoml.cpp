#include "wallx/minitoml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace wallx {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Strips a trailing comment that is not inside a string (we accept no strings,
// so any '#' starts a comment).
std::string strip_comment(const std::string& s) {
  std::size_t p = s.find('#');
  return p == std::string::npos ? s : s.substr(0, p);
}

struct ArrayParser {
  const std::string& s;
  std::size_t pos = 0;
  const std::string& where;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ValidationError(where + ": " + msg + " in '" + s + "'");
  }
  long long parse_int() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos, ++digits;
    if (digits == 0) fail("expected integer");
    if (pos < s.size() && (s[pos] == '.' || s[pos] == 'e' || s[pos] == 'E'))
      fail("floats are not accepted (exact integers only)");
    return std::stoll(s.substr(start, pos - start));
  }
  TomlValue parse_value() {
    skip_ws();
    if (pos >= s.size()) fail("missing value");
    TomlValue v;
    if (s.compare(pos, 4, "true") == 0 && pos + 4 == s.size()) {
      v.kind = TomlValue::BoolK;
      v.b = true;
      pos += 4;
      return v;
    }
    if (s.compare(pos, 5, "false") == 0 && pos + 5 == s.size()) {
      v.kind = TomlValue::BoolK;
      v.b = false;
      pos += 5;
      return v;
    }
    if (s[pos] == '[') return parse_array();
    v.kind = TomlValue::IntK;
    v.i = parse_int();
    skip_ws();
    if (pos != s.size()) fail("trailing characters after value");
    return v;
  }
  TomlValue parse_array() {
    ++pos;  // '['
    skip_ws();
    TomlValue v;
    if (pos < s.size() && s[pos] == '[') {
      v.kind = TomlValue::IntMatK;
      while (true) {
        skip_ws();
        if (pos >= s.size()) fail("unterminated array");
        if (s[pos] == ']') {
          ++pos;
          break;
        }
        if (s[pos] != '[') fail("expected inner array");
        ++pos;
        std::vector<long long> row;
        skip_ws();
        while (pos < s.size() && s[pos] != ']') {
          row.push_back(parse_int());
          skip_ws();
          if (pos < s.size() && s[pos] == ',') {
            ++pos;
            skip_ws();
          }
        }
        if (pos >= s.size()) fail("unterminated inner array");
        ++pos;  // ']'
        v.mat.push_back(std::move(row));
        skip_ws();
        if (pos < s.size() && s[pos] == ',') ++pos;
      }
      return v;
    }
    v.kind = TomlValue::IntListK;
    while (true) {
      skip_ws();
      if (pos >= s.size()) fail("unterminated array");
      if (s[pos] == ']') {
        ++pos;
        break;
      }
      v.list.push_back(parse_int());
      skip_ws();
      if (pos < s.size() && s[pos] == ',') ++pos;
    }
    return v;
  }
};

}  // namespace

TomlDoc TomlDoc::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

TomlDoc TomlDoc::parse_string(const std::string& text, const std::string& origin) {
  TomlDoc doc;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = origin + ":" + std::to_string(lineno);
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ValidationError(where + ": empty section name");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError(where + ": empty key");
    if (section.empty()) throw ValidationError(where + ": key outside any [section]");
    ArrayParser p{val, 0, where};
    TomlValue v = p.parse_value();
    if (p.pos != val.size()) {
      p.skip_ws();
      if (p.pos != val.size()) throw ValidationError(where + ": trailing characters");
    }
    std::string full = section + "." + key;
    if (doc.kv_.count(full)) throw ValidationError(where + ": duplicate key " + full);
    doc.kv_.emplace(full, std::move(v));
  }
  return doc;
}

bool TomlDoc::has(const std::string& section, const std::string& key) const {
  return kv_.count(section + "." + key) > 0;
}

const TomlValue& TomlDoc::fetch(const std::string& section, const std::string& key) const {
  auto it = kv_.find(section + "." + key);
  if (it == kv_.end()) throw ValidationError("missing config key [" + section + "] " + key);
  return it->second;
}

long long TomlDoc::get_int(const std::string& section, const std::string& key) const {
  const auto& v = fetch(section, key);
  if (v.kind != TomlValue::IntK)
    throw ValidationError("config key [" + section + "] " + key + " must be an integer");
  return v.i;
}

long long TomlDoc::get_int_or(const std::string& section, const std::string& key,
                              long long dflt) const {
  return has(section, key) ? get_int(section, key) : dflt;
}

bool TomlDoc::get_bool_or(const std::string& section, const std::string& key, bool dflt) const {
  if (!has(section, key)) return dflt;
  const auto& v = fetch(section, key);
  if (v.kind != TomlValue::BoolK)
    throw ValidationError("config key [" + section + "] " + key + " must be a boolean");
  return v.b;
}

std::vector<long long> TomlDoc::get_int_list(const std::string& section,
                                             const std::string& key) const {
  const auto& v = fetch(section, key);
  if (v.kind == TomlValue::IntListK) return v.list;
  throw ValidationError("config key [" + section + "] " + key + " must be an integer array");
}

std::vector<std::vector<long long>> TomlDoc::get_int_mat(const std::string& section,
                                                         const std::string& key) const {
  const auto& v = fetch(section, key);
  if (v.kind == TomlValue::IntMatK) return v.mat;
  if (v.kind == TomlValue::IntListK && v.list.empty()) return {};
  throw ValidationError("config key [" + section + "] " + key +
                        " must be an array of integer arrays");
}

std::vector<std::string> TomlDoc::keys(const std::string& section) const {
  std::vector<std::string> out;
  std::string prefix = section + ".";
  for (auto& [k, v] : kv_)
    if (k.rfind(prefix, 0) == 0) out.push_back(k.substr(prefix.size()));
  return out;
}

}  // namespace wallx

#include "acrnn/run_config.hpp"

#include <fstream>
#include <sstream>

#include "acrnn/errors.hpp"
#include "acrnn/text.hpp"

namespace acrnn {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool needs_quotes(const std::string& v) {
  if (v.empty()) return true;
  for (char c : v)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#' || c == '"') return true;
  return false;
}

}  // namespace

KeyValues KeyValues::parse(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped;
    bool in_quotes = false;
    for (char c : line) {
      if (c == '"') in_quotes = !in_quotes;
      if (c == '#' && !in_quotes) break;
      stripped += c;
    }
    stripped = trim(stripped);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    kv.set(key, value);
  }
  return kv;
}

KeyValues KeyValues::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string KeyValues::serialize() const {
  std::string out;
  for (const auto& [key, value] : items_) {
    out += key;
    out += " = ";
    if (needs_quotes(value)) {
      out += '"';
      out += value;
      out += '"';
    } else {
      out += value;
    }
    out += '\n';
  }
  return out;
}

void KeyValues::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << serialize();
  if (!out) throw IoError("failed writing " + path);
}

bool KeyValues::has(const std::string& key) const { return get(key).has_value(); }

void KeyValues::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : items_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  items_.emplace_back(key, value);
}

void KeyValues::set_double(const std::string& key, double value) { set(key, format_double(value)); }
void KeyValues::set_u64(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}
void KeyValues::set_bool(const std::string& key, bool value) { set(key, value ? "true" : "false"); }

std::optional<std::string> KeyValues::get(const std::string& key) const {
  for (const auto& [k, v] : items_)
    if (k == key) return v;
  return std::nullopt;
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
  auto v = get(key);
  return v ? *v : fallback;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  auto d = parse_double(*v);
  if (!d) throw ConfigError("config key '" + key + "': bad number '" + *v + "'");
  return *d;
}

std::uint64_t KeyValues::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  auto d = parse_int(*v);
  if (!d || *d < 0) throw ConfigError("config key '" + key + "': bad count '" + *v + "'");
  return static_cast<std::uint64_t>(*d);
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw ConfigError("config key '" + key + "': bad bool '" + *v + "'");
}

std::vector<double> KeyValues::get_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::vector<double> out;
  std::string token;
  std::istringstream in(*v);
  while (std::getline(in, token, ',')) {
    auto d = parse_double(trim(token));
    if (!d) throw ConfigError("config key '" + key + "': bad list entry '" + token + "'");
    out.push_back(*d);
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

}  // namespace acrnn

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace acrnn {

// Flat TOML-style key = value file: one pair per line, # comments, quoted or
// bare values. Order is preserved so serialized manifests are byte-stable.
class KeyValues {
 public:
  static KeyValues parse(const std::string& text);
  static KeyValues parse_file(const std::string& path);

  std::string serialize() const;
  void write_file(const std::string& path) const;

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_u64(const std::string& key, std::uint64_t value);
  void set_bool(const std::string& key, bool value);

  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated numeric list.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

}  // namespace acrnn

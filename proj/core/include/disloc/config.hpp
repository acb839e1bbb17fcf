#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace disloc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sectioned key-value text configuration: `[section]` headers,
/// `key = value` lines, `#` comments.  Typed getters throw ConfigError with
/// the offending field's name.
class Config {
public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const;
  std::vector<double> get_doubles(const std::string& section,
                                  const std::string& key) const;
  std::vector<std::string> get_words(const std::string& section,
                                     const std::string& key) const;

  const std::string& raw() const { return raw_; }

private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string raw_;
};

} // namespace disloc

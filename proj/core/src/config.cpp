#include "disloc/config.hpp"

#include <fstream>
#include <sstream>

namespace disloc {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

} // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  cfg.raw_ = text;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections_[section]; // ensure presence even when empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

bool Config::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

std::string Config::get_string(const std::string& section,
                               const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end() || it->second.count(key) == 0)
    throw ConfigError("missing required field [" + section + "] " + key);
  return it->second.at(key);
}

std::string Config::get_string_or(const std::string& section,
                                  const std::string& key,
                                  const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section,
                          const std::string& key) const {
  const std::string v = get_string(section, key);
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("field [" + section + "] " + key +
                      " is not a number: '" + v + "'");
  }
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long long Config::get_int(const std::string& section,
                          const std::string& key) const {
  const std::string v = get_string(section, key);
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("field [" + section + "] " + key +
                      " is not an integer: '" + v + "'");
  }
}

long long Config::get_int_or(const std::string& section, const std::string& key,
                             long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key) const {
  const std::string v = get_string(section, key);
  std::istringstream ss(v);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) {
    if (!tok.empty() && tok.back() == ',') tok.pop_back();
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("field [" + section + "] " + key +
                        " has a non-numeric entry: '" + tok + "'");
    }
  }
  if (out.empty())
    throw ConfigError("field [" + section + "] " + key + " is empty");
  return out;
}

std::vector<std::string> Config::get_words(const std::string& section,
                                           const std::string& key) const {
  const std::string v = get_string(section, key);
  std::istringstream ss(v);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) {
    if (!tok.empty() && tok.back() == ',') tok.pop_back();
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

} // namespace disloc

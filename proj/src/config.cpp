#include "progrd/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace progrd {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') return false;
  }
  return true;
}

// Removes a trailing comment outside quotes.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::optional<std::string> parse_quoted(const std::string& s) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') return std::nullopt;
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '\\') {
      if (i + 2 >= s.size()) return std::nullopt;
      const char c = s[++i];
      if (c == 'n') {
        out += '\n';
      } else if (c == '"' || c == '\\') {
        out += c;
      } else {
        return std::nullopt;
      }
    } else if (s[i] == '"') {
      return std::nullopt;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

std::optional<long> parse_integer(const std::string& s) {
  long v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

bool scalar_ok(const std::string& s) {
  return s == "true" || s == "false" || parse_number(s) || parse_quoted(s);
}

// Elements of "[a, b, c]"; nullopt if not an array.
std::optional<std::vector<std::string>> split_array(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
  std::vector<std::string> out;
  const std::string body = trim(std::string_view(s).substr(1, s.size() - 2));
  if (body.empty()) return out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (quoted && c == '\\' && i + 1 < body.size()) {
      cur += c;
      cur += body[++i];
      continue;
    }
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool value_ok(const std::string& s) {
  if (auto items = split_array(s)) {
    for (const auto& i : *items) {
      if (!scalar_ok(i)) return false;
    }
    return true;
  }
  return scalar_ok(s);
}

nlohmann::json scalar_json(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  if (auto i = parse_integer(s)) return *i;
  if (auto d = parse_number(s)) return *d;
  if (auto q = parse_quoted(s)) return *q;
  return s;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile out;
  std::vector<std::string> errs;
  std::istringstream in(text);
  std::string line, section;
  out.sections_[section];
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    const std::string at = "line " + std::to_string(no) + ": ";
    if (s.front() == '[') {
      if (s.back() != ']' || !valid_name(trim(std::string_view(s).substr(1, s.size() - 2)))) {
        errs.push_back(at + "malformed section header '" + s + "'");
        continue;
      }
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      out.sections_[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      errs.push_back(at + "expected 'key = value'");
      continue;
    }
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (!valid_name(key)) {
      errs.push_back(at + "invalid key '" + key + "'");
      continue;
    }
    if (!value_ok(value)) {
      errs.push_back(at + "invalid value for '" + key + "': " + value);
      continue;
    }
    auto& sec = out.sections_[section];
    if (sec.count(key)) {
      errs.push_back(at + "duplicate key '" + key + "'");
      continue;
    }
    sec[key] = Entry{value, no, false};
  }
  if (!errs.empty()) {
    std::string msg = "config syntax errors:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return out;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ConfigFile::set(const std::string& section, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (!valid_name(key) || !value_ok(v)) throw ConfigError("invalid override " + section + "." + key + " = " + value);
  sections_[section][key] = Entry{v, 0, false};
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

const ConfigFile::Entry* ConfigFile::lookup(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  k->second.used = true;
  return &k->second;
}

std::string ConfigFile::where(const std::string& section, const std::string& key) const {
  return section.empty() ? key : "[" + section + "] " + key;
}

double ConfigFile::get_double(const std::string& section, const std::string& key, double fallback) const {
  const Entry* e = lookup(section, key);
  if (!e) return remember(section, key, fallback);
  if (auto v = parse_number(e->raw)) return remember(section, key, *v);
  error(where(section, key) + ": expected a number, got " + e->raw);
  return remember(section, key, fallback);
}

long ConfigFile::get_int(const std::string& section, const std::string& key, long fallback) const {
  const Entry* e = lookup(section, key);
  if (!e) return remember(section, key, fallback);
  if (auto v = parse_integer(e->raw)) return remember(section, key, *v);
  error(where(section, key) + ": expected an integer, got " + e->raw);
  return remember(section, key, fallback);
}

std::uint64_t ConfigFile::get_uint(const std::string& section, const std::string& key,
                                   std::uint64_t fallback) const {
  const Entry* e = lookup(section, key);
  if (!e) return remember(section, key, fallback);
  std::uint64_t v = 0;
  const char* end = e->raw.data() + e->raw.size();
  auto [p, ec] = std::from_chars(e->raw.data(), end, v);
  if (ec == std::errc() && p == end) return remember(section, key, v);
  error(where(section, key) + ": expected a non-negative integer, got " + e->raw);
  return remember(section, key, fallback);
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const Entry* e = lookup(section, key);
  if (!e) return remember(section, key, fallback);
  if (e->raw == "true") return remember(section, key, true);
  if (e->raw == "false") return remember(section, key, false);
  error(where(section, key) + ": expected true or false, got " + e->raw);
  return remember(section, key, fallback);
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  const Entry* e = lookup(section, key);
  if (!e) return remember(section, key, fallback);
  if (auto v = parse_quoted(e->raw)) return remember(section, key, *v);
  error(where(section, key) + ": expected a quoted string, got " + e->raw);
  return remember(section, key, fallback);
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key,
                                            const std::vector<double>& fallback) const {
  const Entry* e = lookup(section, key);
  if (!e) return remember(section, key, fallback);
  auto items = split_array(e->raw);
  std::vector<double> out;
  for (const auto& i : items ? *items : std::vector<std::string>{e->raw}) {
    auto v = parse_number(i);
    if (!v) {
      error(where(section, key) + ": expected numbers, got " + e->raw);
      return remember(section, key, fallback);
    }
    out.push_back(*v);
  }
  return remember(section, key, out);
}

std::vector<long> ConfigFile::get_ints(const std::string& section, const std::string& key,
                                       const std::vector<long>& fallback) const {
  const Entry* e = lookup(section, key);
  if (!e) return remember(section, key, fallback);
  auto items = split_array(e->raw);
  std::vector<long> out;
  for (const auto& i : items ? *items : std::vector<std::string>{e->raw}) {
    auto v = parse_integer(i);
    if (!v) {
      error(where(section, key) + ": expected integers, got " + e->raw);
      return remember(section, key, fallback);
    }
    out.push_back(*v);
  }
  return remember(section, key, out);
}

std::vector<std::string> ConfigFile::get_strings(const std::string& section, const std::string& key,
                                                 const std::vector<std::string>& fallback) const {
  const Entry* e = lookup(section, key);
  if (!e) return remember(section, key, fallback);
  auto items = split_array(e->raw);
  std::vector<std::string> out;
  for (const auto& i : items ? *items : std::vector<std::string>{e->raw}) {
    auto v = parse_quoted(i);
    if (!v) {
      error(where(section, key) + ": expected quoted strings, got " + e->raw);
      return remember(section, key, fallback);
    }
    out.push_back(*v);
  }
  return remember(section, key, out);
}

void ConfigFile::finish(const std::map<std::string, std::vector<std::string>>& known) const {
  std::vector<std::string> all = errors_;
  for (const auto& [section, entries] : sections_) {
    const auto k = known.find(section);
    for (const auto& [key, e] : entries) {
      if (e.used) continue;
      if (k != known.end() && std::find(k->second.begin(), k->second.end(), key) != k->second.end()) continue;
      std::string msg = "unknown key " + where(section, key);
      if (e.line > 0) msg += " (line " + std::to_string(e.line) + ")";
      all.push_back(msg);
    }
  }
  if (all.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& e : all) msg += "\n  " + e;
  throw ConfigError(msg);
}

template <class T>
T ConfigFile::remember(const std::string& section, const std::string& key, T value) const {
  if (section.empty()) {
    effective_[key] = value;
  } else {
    effective_[section][key] = value;
  }
  return value;
}

nlohmann::json ConfigFile::to_json() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [section, entries] : sections_) {
    if (entries.empty()) continue;
    nlohmann::json sec = nlohmann::json::object();
    for (const auto& [key, e] : entries) {
      if (auto items = split_array(e.raw)) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& i : *items) arr.push_back(scalar_json(i));
        sec[key] = arr;
      } else {
        sec[key] = scalar_json(e.raw);
      }
    }
    if (section.empty()) {
      out.update(sec);
    } else {
      out[section] = sec;
    }
  }
  return out;
}

GrammarParams grammar_params_from(const ConfigFile& config) {
  GrammarParams p;
  const std::string s = "grammar";
  p.primitives = config.get_strings(s, "primitives", p.primitives);
  p.p_terminal = config.get_double(s, "p_terminal", p.p_terminal);
  p.max_depth = static_cast<int>(config.get_int(s, "max_depth", p.max_depth));
  p.count_max = static_cast<int>(config.get_int(s, "count_max", p.count_max));
  p.time_max = static_cast<int>(config.get_int(s, "time_max", p.time_max));
  p.pause_literal = config.get_bool(s, "pause_literal", p.pause_literal);
  p.max_arity = static_cast<std::size_t>(config.get_int(s, "max_arity", static_cast<long>(p.max_arity)));
  std::vector<std::string> names;
  for (const auto& t : p.intermediates) names.push_back(t.str());
  names = config.get_strings(s, "intermediates", names);
  p.intermediates.clear();
  for (const auto& n : names) {
    try {
      p.intermediates.push_back(parse_type(n));
    } catch (const std::exception& e) {
      config.error("[grammar] intermediates: " + std::string(e.what()));
    }
  }
  try {
    p.validate();
  } catch (const ConfigError& e) {
    config.error(e.what());
  }
  return p;
}

}  // namespace progrd

#pragma once

// Strict key/value configuration text, a TOML subset:
//
//   # comment
//   [section]
//   key = 1.5
//   flag = true
//   name = "text"
//   grid = [8, 16, 32]
//
// Keys before the first section header belong to section "".  Reading a key
// marks it used; finish() reports every malformed value and every key that
// was never read, all at once.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "progrd/grammar.hpp"

namespace progrd {

class ConfigFile {
 public:
  // Throws ConfigError listing every syntax error with its line.
  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);

  // Adds or replaces a value given in config syntax (command-line overrides).
  void set(const std::string& section, const std::string& key, const std::string& value);
  bool has(const std::string& section, const std::string& key) const;

  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  std::uint64_t get_uint(const std::string& section, const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<long> get_ints(const std::string& section, const std::string& key,
                             const std::vector<long>& fallback) const;
  std::vector<std::string> get_strings(const std::string& section, const std::string& key,
                                       const std::vector<std::string>& fallback) const;

  // Records a constraint violation found while interpreting values.
  void error(const std::string& message) const { errors_.push_back(message); }
  // Throws ConfigError with every bad value, violated constraint and unknown
  // key.  Unread keys listed in known are accepted; they belong to other
  // readers of the same file.
  void finish(const std::map<std::string, std::vector<std::string>>& known = {}) const;

  // Every entry as typed JSON, sections as objects.
  nlohmann::json to_json() const;
  // Every value read so far, defaults included.
  const nlohmann::json& effective() const { return effective_; }

 private:
  struct Entry {
    std::string raw;
    std::size_t line = 0;
    mutable bool used = false;
  };
  const Entry* lookup(const std::string& section, const std::string& key) const;
  std::string where(const std::string& section, const std::string& key) const;
  template <class T>
  T remember(const std::string& section, const std::string& key, T value) const;

  std::map<std::string, std::map<std::string, Entry>> sections_;
  mutable std::vector<std::string> errors_;
  mutable nlohmann::json effective_ = nlohmann::json::object();
};

GrammarParams grammar_params_from(const ConfigFile& config);

}  // namespace progrd

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace rlw {

/// Flat configuration: string keys to string values. Later assignments win.
using KeyValues = std::map<std::string, std::string>;

/// Parses a key=value file. Blank lines are skipped and '#' starts a
/// comment. Throws ParseError with the line number on malformed lines.
KeyValues parse_config_file(const std::string& path);

/// Applies one command-line token of the form key=value.
void apply_override(KeyValues& kv, const std::string& token);

/// Typed access to a KeyValues map that tracks which keys were consumed so
/// typos can be rejected. Numeric values accept plain decimals and simple
/// fractions ("1/800").
class ConfigView {
  public:
    explicit ConfigView(KeyValues kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& def);
    double get_double(const std::string& key, double def);
    int get_int(const std::string& key, int def);
    bool get_bool(const std::string& key, bool def);
    std::vector<double> get_double_list(const std::string& key, std::vector<double> def);
    std::vector<std::string> get_string_list(const std::string& key,
                                             std::vector<std::string> def);

    /// Throws ConfigError naming every key that was never consumed.
    void reject_unknown() const;

  private:
    const std::string* lookup(const std::string& key);

    KeyValues kv_;
    std::set<std::string> used_;
};

/// Parses a decimal number or a fraction "p/q".
double parse_number(const std::string& text, const std::string& key);

}  // namespace rlw

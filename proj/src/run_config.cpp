#include "rlw/run_config.hpp"

#include <cstdlib>
#include <fstream>

#include "rlw/errors.hpp"

namespace rlw {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_plain(const std::string& text, const std::string& key) {
    const char* s = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0') {
        throw ConfigError("key '" + key + "': cannot parse '" + text + "' as a number");
    }
    return v;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string piece =
            trim(comma == std::string::npos ? text.substr(start)
                                            : text.substr(start, comma - start));
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

double parse_number(const std::string& text, const std::string& key) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return parse_plain(text, key);
    const double num = parse_plain(trim(text.substr(0, slash)), key);
    const double den = parse_plain(trim(text.substr(slash + 1)), key);
    if (den == 0.0) throw ConfigError("key '" + key + "': division by zero in '" + text + "'");
    return num / den;
}

KeyValues parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'", 0);

    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(lineno) + ": expected key=value, got '" +
                                 line + "'",
                             lineno);
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ParseError("line " + std::to_string(lineno) + ": empty key", lineno);
        }
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_override(KeyValues& kv, const std::string& token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("expected key=value, got '" + token + "'");
    }
    kv[trim(token.substr(0, eq))] = trim(token.substr(eq + 1));
}

const std::string* ConfigView::lookup(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
}

std::string ConfigView::get_string(const std::string& key, const std::string& def) {
    const std::string* v = lookup(key);
    return v ? *v : def;
}

double ConfigView::get_double(const std::string& key, double def) {
    const std::string* v = lookup(key);
    return v ? parse_number(*v, key) : def;
}

int ConfigView::get_int(const std::string& key, int def) {
    const std::string* v = lookup(key);
    if (!v) return def;
    const double d = parse_number(*v, key);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + *v + "'");
    }
    return i;
}

bool ConfigView::get_bool(const std::string& key, bool def) {
    const std::string* v = lookup(key);
    if (!v) return def;
    if (*v == "1" || *v == "true" || *v == "yes" || *v == "on") return true;
    if (*v == "0" || *v == "false" || *v == "no" || *v == "off") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + *v + "'");
}

std::vector<double> ConfigView::get_double_list(const std::string& key,
                                                std::vector<double> def) {
    const std::string* v = lookup(key);
    if (!v) return def;
    std::vector<double> out;
    for (const std::string& piece : split_commas(*v)) out.push_back(parse_number(piece, key));
    return out;
}

std::vector<std::string> ConfigView::get_string_list(const std::string& key,
                                                     std::vector<std::string> def) {
    const std::string* v = lookup(key);
    if (!v) return def;
    return split_commas(*v);
}

void ConfigView::reject_unknown() const {
    std::string bad;
    for (const auto& [key, value] : kv_) {
        if (used_.count(key) == 0) {
            if (!bad.empty()) bad += ", ";
            bad += key;
        }
    }
    if (!bad.empty()) throw ConfigError("unknown configuration keys: " + bad);
}

}  // namespace rlw

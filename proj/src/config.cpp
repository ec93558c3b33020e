#include "emvac/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace emvac {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' &&
            c != '-')
            return false;
    }
    return true;
}

double parse_double(const std::string& where, const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) throw ConfigError(where + ": empty numeric value");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
        throw ConfigError(where + ": not a finite number: '" + s + "'");
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

RunConfig RunConfig::parse_string(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "config line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!valid_name(section))
                throw ConfigError(where + ": bad section name '" + section +
                                  "'");
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_name(key))
            throw ConfigError(where + ": bad key name '" + key + "'");
        if (section.empty())
            throw ConfigError(where + ": key outside any [section]");
        if (cfg.sections_[section].count(key))
            throw ConfigError(where + ": duplicate key '" + section + "." +
                              key + "'");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

void RunConfig::set(const std::string& dotted, const std::string& value) {
    const auto dot = dotted.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == dotted.size())
        throw ConfigError("override key must be 'section.key': '" + dotted +
                          "'");
    set(dotted.substr(0, dot), dotted.substr(dot + 1), value);
}

void RunConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
    if (!valid_name(section) || !valid_name(key))
        throw ConfigError("bad override name '" + section + "." + key + "'");
    sections_[section][key] = trim(value);
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return false;
    return s->second.count(key) != 0;
}

std::string RunConfig::get_string(const std::string& section,
                                  const std::string& key,
                                  std::optional<std::string> fallback) const {
    const auto s = sections_.find(section);
    if (s != sections_.end()) {
        const auto k = s->second.find(key);
        if (k != s->second.end()) return k->second;
    }
    if (fallback) return *fallback;
    throw ConfigError("missing required config key '" + section + "." + key +
                      "'");
}

double RunConfig::get_double(const std::string& section,
                             const std::string& key,
                             std::optional<double> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing required config key '" + section + "." +
                          key + "'");
    }
    return parse_double(section + "." + key, get_string(section, key));
}

long RunConfig::get_int(const std::string& section, const std::string& key,
                        std::optional<long> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing required config key '" + section + "." +
                          key + "'");
    }
    const std::string s = trim(get_string(section, key));
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        throw ConfigError(section + "." + key + ": not an integer: '" + s +
                          "'");
    return v;
}

bool RunConfig::get_bool(const std::string& section, const std::string& key,
                         std::optional<bool> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing required config key '" + section + "." +
                          key + "'");
    }
    const std::string s = trim(get_string(section, key));
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(section + "." + key + ": not a boolean: '" + s + "'");
}

cdouble RunConfig::get_complex(const std::string& section,
                               const std::string& key,
                               std::optional<cdouble> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing required config key '" + section + "." +
                          key + "'");
    }
    const std::string where = section + "." + key;
    const std::string s = trim(get_string(section, key));
    const auto comma = s.find(',');
    if (comma == std::string::npos) return cdouble(parse_double(where, s), 0.0);
    return cdouble(parse_double(where, s.substr(0, comma)),
                   parse_double(where, s.substr(comma + 1)));
}

std::vector<double> RunConfig::get_grid(const std::string& section,
                                        const std::string& key) const {
    const std::string where = section + "." + key;
    const std::string s = get_string(section, key);
    std::vector<double> grid;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        grid.push_back(parse_double(where, s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (grid.empty()) throw ConfigError(where + ": empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1]))
            throw ConfigError(where + ": grid must be strictly increasing");
    }
    return grid;
}

std::string RunConfig::serialize() const {
    std::string out;
    for (const auto& [section, keys] : sections_) {
        out += '[';
        out += section;
        out += "]\n";
        for (const auto& [key, value] : keys) {
            out += key;
            out += " = ";
            out += value;
            out += '\n';
        }
    }
    return out;
}

std::string RunConfig::canonical() const {
    std::string out;
    for (const auto& [section, keys] : sections_) {
        if (section == "run") continue;
        out += '[';
        out += section;
        out += "]\n";
        for (const auto& [key, value] : keys) {
            out += key;
            out += " = ";
            out += value;
            out += '\n';
        }
    }
    return out;
}

std::uint64_t RunConfig::hash() const {
    const std::string c = canonical();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char byte : c) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace emvac

#include "mlab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mlab/geometry.hpp"

namespace mlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, const std::string& where) {
    const char* c = s.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end == c || end != c + s.size())
        throw ConfigError(where + ": '" + s + "' is not a number");
    return v;
}

long long parse_int(const std::string& s, const std::string& where) {
    const char* c = s.c_str();
    char* end = nullptr;
    long long v = std::strtoll(c, &end, 10);
    if (end == c || end != c + s.size())
        throw ConfigError(where + ": '" + s + "' is not an integer");
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = s.find(',', start);
        std::string tok = trim(pos == std::string::npos ? s.substr(start) : s.substr(start, pos - start));
        if (!tok.empty()) out.push_back(tok);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

bool ConfigMap::has(const std::string& key) const { return values.count(key) != 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    consumed.insert(key);
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    consumed.insert(key);
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    return parse_double(it->second, source_name + ": key '" + key + "'");
}

long long ConfigMap::get_int(const std::string& key, long long fallback) const {
    consumed.insert(key);
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    return parse_int(it->second, source_name + ": key '" + key + "'");
}

std::uint64_t ConfigMap::get_seed(const std::string& key, std::uint64_t fallback) const {
    consumed.insert(key);
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    const std::string& s = it->second;
    const char* c = s.c_str();
    char* end = nullptr;
    unsigned long long v = std::strtoull(c, &end, 10);
    if (end == c || end != c + s.size())
        throw ConfigError(source_name + ": key '" + key + "': '" + s + "' is not a seed");
    return static_cast<std::uint64_t>(v);
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    consumed.insert(key);
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    const std::string& s = it->second;
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(source_name + ": key '" + key + "': '" + s + "' is not a boolean");
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) const {
    consumed.insert(key);
    auto it = values.find(key);
    std::vector<double> out;
    if (it == values.end()) return out;
    for (const std::string& tok : split_list(it->second))
        out.push_back(parse_double(tok, source_name + ": key '" + key + "'"));
    if (out.empty()) throw ConfigError(source_name + ": key '" + key + "' has an empty list");
    return out;
}

std::vector<long long> ConfigMap::get_int_list(const std::string& key) const {
    consumed.insert(key);
    auto it = values.find(key);
    std::vector<long long> out;
    if (it == values.end()) return out;
    for (const std::string& tok : split_list(it->second))
        out.push_back(parse_int(tok, source_name + ": key '" + key + "'"));
    if (out.empty()) throw ConfigError(source_name + ": key '" + key + "' has an empty list");
    return out;
}

void ConfigMap::check_all_consumed() const {
    std::string unknown;
    for (const auto& kv : entries) {
        if (!consumed.count(kv.first)) {
            if (!unknown.empty()) unknown += ", ";
            auto ln = lines.find(kv.first);
            unknown += "'" + kv.first + "' (line " + std::to_string(ln->second) + ")";
        }
    }
    if (!unknown.empty())
        throw ConfigError(source_name + ": unknown config keys: " + unknown);
}

ConfigMap parse_config_text(const std::string& text, const std::string& source_name) {
    ConfigMap cfg;
    cfg.source_name = source_name;
    std::istringstream in(text);
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source_name + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(source_name + ":" + std::to_string(line_no) + ": empty key");
        if (cfg.values.count(key))
            throw ConfigError(source_name + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        cfg.entries.emplace_back(key, value);
        cfg.values[key] = value;
        cfg.lines[key] = line_no;
    }
    return cfg;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace mlab

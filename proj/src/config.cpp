#include "pemfc/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pemfc {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
    if (k.empty() || k.front() == '.' || k.back() == '.') return false;
    bool has_dot = false;
    for (char c : k) {
        if (c == '.') {
            has_dot = true;
        } else if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
            return false;
        }
    }
    return has_dot;
}

}  // namespace

std::vector<ConfigEntry> parse_config_text(const std::string& text) {
    std::vector<ConfigEntry> out;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        size_t hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;

        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected `section.key = value`");

        ConfigEntry e;
        e.line = lineno;
        e.key = trim(line.substr(0, eq));
        std::string rhs = trim(line.substr(eq + 1));
        if (!valid_key(e.key))
            throw ConfigError("config line " + std::to_string(lineno) + ": malformed key `" + e.key + "`");
        if (rhs.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": missing value for `" + e.key + "`");

        if (rhs.back() == ']') {
            size_t open = rhs.rfind('[');
            if (open == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": unmatched `]` in value of `" + e.key + "`");
            e.unit = trim(rhs.substr(open + 1, rhs.size() - open - 2));
            rhs = trim(rhs.substr(0, open));
            if (rhs.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": missing value for `" + e.key + "`");
        }
        e.value = rhs;
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ConfigEntry> parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

double parse_double(const ConfigEntry& e) {
    const char* s = e.value.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw ConfigError("key `" + e.key + "`: not a number: `" + e.value + "`");
    return v;
}

long parse_long(const ConfigEntry& e) {
    const char* s = e.value.c_str();
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0')
        throw ConfigError("key `" + e.key + "`: not an integer: `" + e.value + "`");
    return v;
}

std::vector<double> parse_double_list(const ConfigEntry& e) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(e.value);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("key `" + e.key + "`: empty element in list");
        const char* s = item.c_str();
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end == s || *end != '\0')
            throw ConfigError("key `" + e.key + "`: not a number: `" + item + "`");
        out.push_back(v);
    }
    if (out.empty())
        throw ConfigError("key `" + e.key + "`: empty list");
    return out;
}

}  // namespace pemfc

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace pemfc {

// Errors raised while reading a configuration file (syntax, unknown key,
// malformed number). Carries the offending key or line context in what().
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A parameter value failed a physical-plausibility check. what() names the
// offending configuration key.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// One `section.key = value [unit]` line.
struct ConfigEntry {
    std::string key;    // "section.name"
    std::string value;  // raw value text (numbers, enum token, comma list)
    std::string unit;   // optional [unit] annotation, empty if absent
    int line = 0;
};

// Parse configuration text in the documented grammar:
//   - blank lines and lines starting with '#' are ignored
//   - trailing '#' comments are stripped
//   - each remaining line is `section.key = value [unit]`
//   - the [unit] suffix is optional; when present it is matched against the
//     documented unit of the key at apply time (anti-typo)
std::vector<ConfigEntry> parse_config_text(const std::string& text);
std::vector<ConfigEntry> parse_config_file(const std::filesystem::path& path);

// Value parsing helpers. Whole-string matches only; throw ConfigError naming
// the key otherwise.
double parse_double(const ConfigEntry& e);
long parse_long(const ConfigEntry& e);
std::vector<double> parse_double_list(const ConfigEntry& e);

}  // namespace pemfc

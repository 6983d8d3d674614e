#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

namespace rotsym {

// Minimal TOML reader covering the subset used by spec and override files:
// bare tables, arrays of tables, key = value with strings, numbers,
// booleans and (nested, possibly multi-line) arrays. Parsed into JSON.
// Throws config errors carrying line numbers.
nlohmann::json parse_toml(const std::string& text, const std::string& origin = "<string>");
nlohmann::json parse_toml_file(const std::filesystem::path& path);

}  // namespace rotsym

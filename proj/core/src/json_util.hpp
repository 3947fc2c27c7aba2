#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace napmon::detail {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Parses JSON text; syntax errors become ParseError("line L, column C").
json parse_json(std::string_view text);

/// Reads a required member, throwing ParseError naming `path` when absent.
const json& member(const json& obj, const char* key, const std::string& path);

/// Finite double from a JSON number. Rejects non-numbers and overflowed
/// literals such as 1e999.
double finite_number(const json& j, const std::string& path);

/// Like finite_number but also accepts the strings "-inf" and "inf".
double extended_number(const json& j, const std::string& path);
json extended_number_json(double v);

std::size_t index_value(const json& j, const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace napmon::detail

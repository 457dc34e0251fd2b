#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace gramtrans {

std::string read_text_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

// Writes through a sibling temporary file and renames it into place, so a
// reader never observes a half-written file.
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Calls `fn(line_number, json)` for each non-blank line. Line numbers are
// 1-based. Throws FormatError naming the line on malformed JSON.
template <class Fn>
void for_each_json_line(const std::filesystem::path& path, Fn&& fn);

// Stable, human-diffable serialization used for every file the tools write.
std::string dump_json(const nlohmann::json& j);

}  // namespace gramtrans

#include "gramtrans/errors.hpp"
#include <fstream>

template <class Fn>
void gramtrans::for_each_json_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json value;
    try {
      value = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(path.string() + ":" + std::to_string(number) + ": malformed JSON: " + e.what());
    }
    fn(number, value);
  }
}

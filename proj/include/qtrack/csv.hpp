#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace qtrack {

// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);
std::string format_int(std::int64_t v);

// Writes via a temporary file then renames into place.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

} // namespace qtrack

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace hashcoll {

/// Writes bytes to a sibling temp file, then renames it over the destination.
void write_file_atomic(const std::filesystem::path& path, std::span<const unsigned char> bytes);
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace hashcoll

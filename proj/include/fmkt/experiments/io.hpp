#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace fmkt {

// RFC-style CSV field quoting; UTF-8 passthrough, LF line endings are the
// caller's responsibility.
std::string csv_escape(std::string_view field);

// Write via a temp file in the same directory, then rename into place.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace fmkt

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace latalign {

/// Throws IoError when the file cannot be opened or read.
std::string ReadFile(const std::filesystem::path &path);

/// Writes to a sibling temp file and renames it over `path`, so readers never
/// observe a truncated file.
void WriteFileAtomic(const std::filesystem::path &path, std::string_view contents);

}  // namespace latalign

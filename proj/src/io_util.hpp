#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace monopole {

// Writes to a sibling temporary and renames it over path. Throws Error{io}.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);

// Throws Error{io} if the file cannot be read.
std::string read_file(const std::filesystem::path& path);

}  // namespace monopole

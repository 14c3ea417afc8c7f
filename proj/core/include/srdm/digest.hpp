#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

namespace srdm {

/// SHA-256 of a byte buffer, lowercase hex.
std::string sha256_hex(const void* data, size_t len);
std::string sha256_hex(std::string_view s);

/// SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace srdm

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace scholarmetrics {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Digest over every regular file below `root`: sorted relative paths and
/// their contents. Two trees hash equal iff they are byte-identical.
std::string sha256_tree(const std::filesystem::path& root);

}  // namespace scholarmetrics

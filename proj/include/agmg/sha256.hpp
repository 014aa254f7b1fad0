#pragma once

#include <string>
#include <string_view>

namespace agmg {

// FIPS 180-4 SHA-256; returns lowercase hex digest.
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::string& path);  // throws on I/O failure

}  // namespace agmg

#pragma once
#include <cstdint>
#include <string>

namespace wallx {

// Self-contained SHA-256 (FIPS 180-4), used only for cache keys.
std::string sha256_hex(const std::string& data);

}  // namespace wallx

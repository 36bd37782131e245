#pragma once

// Basis-cache file format:
//   "GF2B" | version:u8 | rows:u32 | cols:u32 |
//   rows * ceil(cols/64) little-endian u64 words |
//   cols * (len:u32 | UTF-8 label bytes)            -- column basis, in order
// All integers little-endian. Row labels are not stored.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "zeroless/gf2.hpp"

namespace zeroless {

inline constexpr std::uint8_t kBasisCacheVersion = 1;

std::vector<std::uint8_t> encode_basis_cache(const Gf2Matrix& m);
// Rows come back labeled r0, r1, ...
Gf2Matrix decode_basis_cache(std::span<const std::uint8_t> bytes);

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

std::string sha256_hex(std::span<const std::uint8_t> bytes);

}  // namespace zeroless

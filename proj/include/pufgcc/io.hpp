/**
 * \file io.hpp
 * \brief On-disk formats: helper-data files, response files, key files.
 *
 * Helper-data file layout (all integers little-endian):
 *
 *   offset  size  field
 *   0       4     magic "PUFS"
 *   4       1     version, 0x01
 *   5       1     scheme: 0x01 syndrome, 0x02 code-offset
 *   6       1     L = length of the code id
 *   7       L     code id, ASCII
 *   7+L     4     payload bit count
 *   11+L    ...   payload, packed little-endian within bytes, zero padded
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pufgcc/bits.hpp"
#include "pufgcc/sketch.hpp"

namespace pufgcc {

/// Malformed file contents or I/O failure.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint8_t kHelperVersion = 0x01;

std::vector<std::uint8_t> serialize_helper(const HelperData& helper);
HelperData parse_helper(std::span<const std::uint8_t> bytes);

enum class ResponseFormat { Binary, Hex, Bits };

/// ".bin" packed bytes, ".hex" hex text, ".bits" / ".txt" one '0'/'1' per bit.
ResponseFormat format_from_extension(const std::filesystem::path& path);
ResponseFormat parse_format_name(std::string_view name);

/// Hex text encodes the packed byte stream, two digits per byte; whitespace
/// is ignored. Binary and hex files therefore always hold 8 * bytes bits.
BitVector decode_response(std::string_view contents, ResponseFormat format);
std::string encode_response(const BitVector& bits, ResponseFormat format);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace pufgcc

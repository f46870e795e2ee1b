#include "pufgcc/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "pufgcc/error.hpp"

namespace pufgcc {

namespace {

constexpr std::string_view kMagic = "PUFS";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::vector<std::uint8_t> serialize_helper(const HelperData& helper) {
  if (helper.code_id.size() > 255) throw UsageError("code id longer than 255 bytes");
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.push_back(kHelperVersion);
  out.push_back(static_cast<std::uint8_t>(helper.scheme));
  out.push_back(static_cast<std::uint8_t>(helper.code_id.size()));
  out.insert(out.end(), helper.code_id.begin(), helper.code_id.end());
  const auto bits = static_cast<std::uint32_t>(helper.payload.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  const auto payload = helper.payload.to_bytes();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

HelperData parse_helper(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  auto need = [&](std::size_t count, const char* what) {
    if (bytes.size() - pos < count) throw ParseError(std::string("helper file truncated in ") + what);
  };
  need(4, "magic");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) throw ParseError("not a helper file (bad magic)");
  pos = 4;
  need(2, "header");
  if (bytes[pos] != kHelperVersion) {
    throw ParseError("unsupported helper file version " + std::to_string(bytes[pos]));
  }
  HelperData h;
  const std::uint8_t scheme = bytes[pos + 1];
  if (scheme != 0x01 && scheme != 0x02) throw ParseError("unknown sketch scheme " + std::to_string(scheme));
  h.scheme = static_cast<SketchScheme>(scheme);
  pos += 2;
  need(1, "code id length");
  const std::size_t id_len = bytes[pos++];
  need(id_len, "code id");
  h.code_id.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + id_len));
  for (char c : h.code_id) {
    if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) > 0x7e) {
      throw ParseError("code id is not printable ASCII");
    }
  }
  pos += id_len;
  need(4, "payload length");
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= std::uint32_t{bytes[pos + static_cast<std::size_t>(i)]} << (8 * i);
  pos += 4;
  const std::size_t payload_bytes = (std::size_t{bits} + 7) / 8;
  if (bytes.size() - pos != payload_bytes) {
    throw ParseError("helper payload holds " + std::to_string(bytes.size() - pos) + " bytes, header implies " +
                     std::to_string(payload_bytes));
  }
  h.payload = BitVector::from_bytes(bytes.subspan(pos), bits);
  if (bits % 8 != 0 && (bytes.back() >> (bits % 8)) != 0) throw ParseError("nonzero padding bits");
  return h;
}

ResponseFormat format_from_extension(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".bin") return ResponseFormat::Binary;
  if (ext == ".hex") return ResponseFormat::Hex;
  if (ext == ".bits" || ext == ".txt") return ResponseFormat::Bits;
  throw UsageError("cannot infer response format from '" + path.string() +
                   "'; use .bin, .hex, .bits or pass --format");
}

ResponseFormat parse_format_name(std::string_view name) {
  if (name == "bin") return ResponseFormat::Binary;
  if (name == "hex") return ResponseFormat::Hex;
  if (name == "bits") return ResponseFormat::Bits;
  throw UsageError("unknown response format '" + std::string(name) + "' (bin, hex, bits)");
}

BitVector decode_response(std::string_view contents, ResponseFormat format) {
  switch (format) {
    case ResponseFormat::Binary: {
      std::vector<std::uint8_t> bytes(contents.begin(), contents.end());
      return BitVector::from_bytes(bytes, bytes.size() * 8);
    }
    case ResponseFormat::Hex: {
      std::vector<int> digits;
      for (char c : contents) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        const int v = hex_value(c);
        if (v < 0) throw ParseError(std::string("invalid hex digit '") + c + "'");
        digits.push_back(v);
      }
      if (digits.size() % 2 != 0) throw ParseError("hex response has an odd number of digits");
      std::vector<std::uint8_t> bytes;
      for (std::size_t i = 0; i < digits.size(); i += 2) {
        bytes.push_back(static_cast<std::uint8_t>(digits[i] << 4 | digits[i + 1]));
      }
      return BitVector::from_bytes(bytes, bytes.size() * 8);
    }
    case ResponseFormat::Bits: {
      std::string bits;
      for (char c : contents) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c != '0' && c != '1') throw ParseError(std::string("invalid bit character '") + c + "'");
        bits.push_back(c);
      }
      return BitVector::from_string(bits);
    }
  }
  throw ParseError("unknown response format");
}

std::string encode_response(const BitVector& bits, ResponseFormat format) {
  switch (format) {
    case ResponseFormat::Binary: {
      const auto bytes = bits.to_bytes();
      return {bytes.begin(), bytes.end()};
    }
    case ResponseFormat::Hex:
      return to_hex(bits.to_bytes()) + "\n";
    case ResponseFormat::Bits:
      return bits.to_string() + "\n";
  }
  throw UsageError("unknown response format");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw ParseError("error reading '" + path.string() + "'");
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::random_device rd;
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw ParseError("error writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ParseError("cannot move output into place at '" + path.string() + "'");
  }
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (std::uint8_t b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

}  // namespace pufgcc

/**
 * \file sketch.hpp
 * \brief Secure sketches over a Codec and key extraction.
 *
 * Syndrome sketch: helper = H y. Recovery computes s = H y' ^ helper = H e,
 * takes the particular solution v of H v = s with free coordinates zero,
 * decodes v to a codeword c, and returns y' ^ (v ^ c).
 *
 * Code-offset sketch: helper = y ^ encode(x) for a uniformly drawn x.
 * Recovery decodes y' ^ helper to c and returns helper ^ c.
 *
 * In both schemes y splits as c ^ t, where c is a codeword and t is fixed by
 * the helper data alone; the information word of c is the secret carried by
 * y and is what key extraction consumes.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pufgcc/bits.hpp"
#include "pufgcc/codec.hpp"

namespace pufgcc {

enum class SketchScheme : std::uint8_t { Syndrome = 0x01, CodeOffset = 0x02 };

struct HelperData {
  SketchScheme scheme = SketchScheme::Syndrome;
  std::string code_id;
  BitVector payload;  // n - k syndrome bits, or n offset bits

  bool operator==(const HelperData&) const = default;
};

std::size_t helper_payload_bits(const Codec& codec, SketchScheme scheme);

HelperData sketch(const Codec& codec, const BitVector& y);

/// Syndrome-scheme recovery. nullopt when the decoder fails.
std::optional<BitVector> recover(const Codec& codec, const BitVector& y_prime,
                                 const HelperData& helper);

struct CodeOffsetEnrollment {
  HelperData helper;
  BitVector info;  // the drawn x
};

CodeOffsetEnrollment code_offset_sketch(const Codec& codec, const BitVector& y, std::mt19937_64& rng);

std::optional<BitVector> code_offset_recover(const Codec& codec, const BitVector& y_prime,
                                             const HelperData& helper);

/// Dispatches on helper.scheme.
std::optional<BitVector> recover_any(const Codec& codec, const BitVector& y_prime,
                                     const HelperData& helper);

/// Information word of the codeword component of y under the given helper data.
BitVector secret_info(const Codec& codec, const BitVector& y, const HelperData& helper);

/// One-way function used to derive keys. Injected so callers choose between
/// a cryptographic hash and the reproducible test digest.
struct Digest {
  std::string name;
  std::size_t output_bits = 0;
  std::function<std::vector<std::uint8_t>(std::span<const std::uint8_t>)> apply;
};

/// SHA-256 (OpenSSL).
Digest sha256_digest();

/// Non-cryptographic 256-bit digest for reproducible test vectors: four
/// FNV-1a-64 lanes, lane i starting from the FNV offset basis XOR i and each
/// emitting its final state as 8 little-endian bytes.
Digest test_digest();

/// Digest of the packed input bytes, truncated to the first `out_bits` bits.
BitVector extract_key(const BitVector& input, std::size_t out_bits, const Digest& digest);

/// Key material: the first min(key_bits, k) recovered information bits.
BitVector key_material(const BitVector& info, std::size_t key_bits = 128);

}  // namespace pufgcc

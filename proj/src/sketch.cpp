#include "pufgcc/sketch.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>
#include <string>

#include "pufgcc/error.hpp"

namespace pufgcc {

namespace {

void check_response(const Codec& codec, const BitVector& y) {
  if (y.size() != codec.n()) {
    throw UsageError(codec.id() + ": expected " + std::to_string(codec.n()) + " response bits, got " +
                     std::to_string(y.size()));
  }
}

void check_helper(const Codec& codec, const HelperData& helper) {
  if (helper.code_id != codec.id()) {
    throw UsageError("helper data is for code '" + helper.code_id + "', not '" + codec.id() + "'");
  }
  if (helper.payload.size() != helper_payload_bits(codec, helper.scheme)) {
    throw UsageError("helper payload has " + std::to_string(helper.payload.size()) +
                     " bits, expected " + std::to_string(helper_payload_bits(codec, helper.scheme)));
  }
}

BitVector random_bits(std::size_t count, std::mt19937_64& rng) {
  BitVector v(count);
  for (auto& w : v.mutable_words()) w = rng();
  if (count % 64 != 0) v.mutable_words().back() &= (std::uint64_t{1} << (count % 64)) - 1;
  return v;
}

}  // namespace

std::size_t helper_payload_bits(const Codec& codec, SketchScheme scheme) {
  return scheme == SketchScheme::Syndrome ? codec.n() - codec.k() : codec.n();
}

HelperData sketch(const Codec& codec, const BitVector& y) {
  check_response(codec, y);
  return {SketchScheme::Syndrome, codec.id(), mat_vec_mul(codec.parity_check(), y)};
}

std::optional<BitVector> recover(const Codec& codec, const BitVector& y_prime,
                                 const HelperData& helper) {
  check_response(codec, y_prime);
  if (helper.scheme != SketchScheme::Syndrome) throw UsageError("recover: helper is not a syndrome sketch");
  check_helper(codec, helper);
  const BitVector s = mat_vec_mul(codec.parity_check(), y_prime) ^ helper.payload;
  const BitVector v = codec.syndrome_solver().solve(s);
  const auto info = codec.decode(v);
  if (!info) return std::nullopt;
  const BitVector error = v ^ codec.encode(*info);
  return y_prime ^ error;
}

CodeOffsetEnrollment code_offset_sketch(const Codec& codec, const BitVector& y, std::mt19937_64& rng) {
  check_response(codec, y);
  BitVector x = random_bits(codec.k(), rng);
  HelperData helper{SketchScheme::CodeOffset, codec.id(), y ^ codec.encode(x)};
  return {std::move(helper), std::move(x)};
}

std::optional<BitVector> code_offset_recover(const Codec& codec, const BitVector& y_prime,
                                             const HelperData& helper) {
  check_response(codec, y_prime);
  if (helper.scheme != SketchScheme::CodeOffset) {
    throw UsageError("code_offset_recover: helper is not a code-offset sketch");
  }
  check_helper(codec, helper);
  const auto info = codec.decode(y_prime ^ helper.payload);
  if (!info) return std::nullopt;
  return helper.payload ^ codec.encode(*info);
}

std::optional<BitVector> recover_any(const Codec& codec, const BitVector& y_prime,
                                     const HelperData& helper) {
  return helper.scheme == SketchScheme::Syndrome ? recover(codec, y_prime, helper)
                                                 : code_offset_recover(codec, y_prime, helper);
}

BitVector secret_info(const Codec& codec, const BitVector& y, const HelperData& helper) {
  check_response(codec, y);
  check_helper(codec, helper);
  const BitVector offset = helper.scheme == SketchScheme::Syndrome
                               ? codec.syndrome_solver().solve(helper.payload)
                               : helper.payload;
  auto info = codec.decode(y ^ offset);
  if (!info) throw std::logic_error("secret_info: codeword component failed to decode");
  return std::move(*info);
}

Digest sha256_digest() {
  return {"sha256", 256, [](std::span<const std::uint8_t> data) {
            std::vector<std::uint8_t> out(EVP_MAX_MD_SIZE);
            unsigned int len = 0;
            if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
              throw std::runtime_error("EVP_Digest(sha256) failed");
            }
            out.resize(len);
            return out;
          }};
}

Digest test_digest() {
  return {"fnv1a-4x64", 256, [](std::span<const std::uint8_t> data) {
            constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
            constexpr std::uint64_t kPrime = 0x100000001b3ULL;
            std::vector<std::uint8_t> out;
            for (std::uint64_t lane = 0; lane < 4; ++lane) {
              std::uint64_t h = kOffset ^ lane;
              for (std::uint8_t b : data) {
                h ^= b;
                h *= kPrime;
              }
              for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(h >> (8 * i)));
            }
            return out;
          }};
}

BitVector extract_key(const BitVector& input, std::size_t out_bits, const Digest& digest) {
  if (out_bits > digest.output_bits) {
    throw UsageError("extract_key: " + std::to_string(out_bits) + " bits requested from a " +
                     std::to_string(digest.output_bits) + "-bit digest");
  }
  const auto bytes = input.to_bytes();
  const auto hashed = digest.apply(bytes);
  return BitVector::from_bytes(hashed, out_bits);
}

BitVector key_material(const BitVector& info, std::size_t key_bits) {
  return info.slice(0, std::min(key_bits, info.size()));
}

}  // namespace pufgcc

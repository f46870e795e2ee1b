#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "pufgcc/codec.hpp"
#include "pufgcc/error.hpp"
#include "pufgcc/io.hpp"
#include "pufgcc/sketch.hpp"

using namespace pufgcc;

namespace {

BitVector random_bits(std::mt19937_64& rng, std::size_t n) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, (rng() & 1U) != 0);
  return v;
}

std::string hex_of(const BitVector& v) { return to_hex(v.to_bytes()); }

BitVector bytes_to_bits(std::initializer_list<std::uint8_t> bytes) {
  std::vector<std::uint8_t> b(bytes);
  return BitVector::from_bytes(b, b.size() * 8);
}

}  // namespace

TEST_CASE("syndrome sketch basics") {
  const LinearCodec rep(repetition_code(3));
  CHECK(rep.parity_check() == BitMatrix::from_strings({"110", "101"}));
  const auto h = sketch(rep, BitVector::from_string("110"));
  CHECK(h.scheme == SketchScheme::Syndrome);
  CHECK(h.code_id == rep.id());
  CHECK(h.payload.to_string() == "01");
  CHECK_FALSE(sketch(rep, BitVector::from_string("111")).payload.any());
  CHECK_THROWS_AS(sketch(rep, BitVector(4)), UsageError);

  const auto gcc = make_codec("gcc-2048-131");
  REQUIRE(gcc);
  CHECK(helper_payload_bits(*gcc, SketchScheme::Syndrome) == 1917);
  CHECK(helper_payload_bits(*gcc, SketchScheme::CodeOffset) == 2048);
  std::mt19937_64 rng(1);
  const auto y = random_bits(rng, 2048);
  const auto w = sketch(*gcc, y);
  CHECK(w.payload.size() == 1917);
  CHECK(w == sketch(*gcc, y));
  for (int t = 0; t < 5; ++t) {
    const auto c = gcc->encode(random_bits(rng, 131));
    CHECK_FALSE(sketch(*gcc, c).payload.any());
    CHECK(sketch(*gcc, y ^ c) == w);
  }
}

TEST_CASE("syndrome recovery on gcc-2048-131") {
  const auto gcc = make_codec("gcc-2048-131");
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const auto y = random_bits(rng, 2048);
    const auto w = sketch(*gcc, y);
    CHECK(recover(*gcc, y, w) == y);
    auto y_prime = y;
    for (std::size_t row = 0; row < 128; ++row) {
      std::set<std::size_t> pos;
      const std::size_t count = rng() % 4;
      while (pos.size() < count) pos.insert(rng() % 16);
      for (auto p : pos) y_prime.flip(row * 16 + p);
    }
    const auto out = recover(*gcc, y_prime, w);
    REQUIRE(out.has_value());
    CHECK(*out == y);
    CHECK(secret_info(*gcc, *out, w) == secret_info(*gcc, y, w));
  }
}

TEST_CASE("helper data must match the codec") {
  const auto toy = make_codec("toy-64-19");
  const auto rm = make_codec("rm-1-3");
  const auto w = sketch(*rm, BitVector(8));
  CHECK_THROWS_AS(recover(*toy, BitVector(64), w), UsageError);
  auto bad = sketch(*toy, BitVector(64));
  bad.payload = BitVector(44);
  CHECK_THROWS_AS(recover(*toy, BitVector(64), bad), UsageError);
  std::mt19937_64 rng(0);
  const auto offset = code_offset_sketch(*toy, BitVector(64), rng).helper;
  CHECK_THROWS_AS(recover(*toy, BitVector(64), offset), UsageError);
}

TEST_CASE("toy instance: recovery is exact or flagged") {
  const auto toy = make_codec("toy-64-19");
  std::mt19937_64 rng(3);
  std::size_t exact = 0;
  std::size_t flagged = 0;

  // Every row-local pattern of weight <= 7.
  for (int t = 0; t < 4; ++t) {
    const auto y = random_bits(rng, 64);
    const auto w = sketch(*toy, y);
    for (std::size_t row = 0; row < 8; ++row) {
      for (std::uint64_t e = 1; e < 256; ++e) {
        if (std::popcount(e) > 7) continue;
        auto y_prime = y;
        for (std::size_t b = 0; b < 8; ++b) {
          if ((e >> b) & 1U) y_prime.flip(row * 8 + b);
        }
        const auto out = recover(*toy, y_prime, w);
        if (out) {
          CHECK(*out == y);
          ++exact;
        } else {
          ++flagged;
        }
      }
    }
  }

  // Random patterns of weight <= 7 across rows, both schemes.
  for (int t = 0; t < 3000; ++t) {
    const auto y = random_bits(rng, 64);
    auto y_prime = y;
    std::set<std::size_t> pos;
    const std::size_t weight = 1 + rng() % 7;
    while (pos.size() < weight) pos.insert(rng() % 64);
    for (auto p : pos) y_prime.flip(p);

    const auto w = sketch(*toy, y);
    const auto out = recover(*toy, y_prime, w);
    if (out) {
      CHECK(*out == y);
      ++exact;
    } else {
      ++flagged;
    }
    const auto enrolled = code_offset_sketch(*toy, y, rng);
    const auto out2 = code_offset_recover(*toy, y_prime, enrolled.helper);
    if (out2) {
      CHECK(*out2 == y);
      CHECK(secret_info(*toy, *out2, enrolled.helper) == enrolled.info);
    }
  }
  MESSAGE("toy sweep: " << exact << " exact recoveries, " << flagged << " flagged failures");
  CHECK(exact > flagged);
}

TEST_CASE("code-offset construction") {
  const auto gcc = make_codec("gcc-2048-131");
  std::mt19937_64 rng(4);
  const auto y = random_bits(rng, 2048);
  const auto e = code_offset_sketch(*gcc, y, rng);
  CHECK(e.helper.scheme == SketchScheme::CodeOffset);
  CHECK(e.helper.payload == (y ^ gcc->encode(e.info)));
  CHECK(code_offset_recover(*gcc, y, e.helper) == y);
  CHECK(recover_any(*gcc, y, e.helper) == y);
  CHECK(secret_info(*gcc, y, e.helper) == e.info);

  // A codeword response with a zero draw leaves the response as the helper.
  const auto toy = make_codec("rm-1-3");
  const auto c = toy->encode(BitVector::from_string("1101"));
  for (int t = 0; t < 64; ++t) {
    const auto d = code_offset_sketch(*toy, c, rng);
    if (!d.info.any()) CHECK(d.helper.payload == c);
    CHECK(code_offset_recover(*toy, c, d.helper) == c);
  }
}

TEST_CASE("digest test vectors") {
  const auto sha = sha256_digest();
  const auto fnv = test_digest();
  CHECK(sha.output_bits == 256);
  CHECK(fnv.output_bits == 256);
  CHECK(to_hex(sha.apply({})) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const std::vector<std::uint8_t> abc{'a', 'b', 'c'};
  CHECK(to_hex(sha.apply(abc)) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(to_hex(fnv.apply({})) == "25232284e49cf2cb24232284e49cf2cb27232284e49cf2cb26232284e49cf2cb");
  CHECK(to_hex(fnv.apply(abc)) == "4b57410519a21fe7ec41660919c3e2ee8949dc0c1904d9f5f265411319154300");
}

TEST_CASE("key extraction") {
  const auto sha = sha256_digest();
  const auto fnv = test_digest();
  BitVector alternating(128);
  for (std::size_t i = 0; i < 128; i += 2) alternating.set(i);
  CHECK(hex_of(extract_key(alternating, 128, sha)) == "b1bfaa407f70c80c650379dfeafaa40f");
  CHECK(hex_of(extract_key(alternating, 128, fnv)) == "5520bb25a64fe5d794016a966433595c");
  CHECK(extract_key(alternating, 128, sha) == extract_key(alternating, 128, sha));
  CHECK(extract_key(alternating, 12, sha).size() == 12);
  CHECK_THROWS_AS(extract_key(alternating, 257, sha), UsageError);

  const auto ones = bytes_to_bits({0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff,
                                   0xff, 0xff, 0xff, 0xff});
  CHECK(hex_of(extract_key(ones, 256, sha)) ==
        "5ac6a5945f16500911219129984ba8b387a06f24fe383ce4e81a73294065461b");

  BitVector info(131);
  info.set(130);
  const auto material = key_material(info);
  CHECK(material.size() == 128);
  CHECK_FALSE(material.any());
  CHECK(extract_key(material, 128, sha).size() == 128);

  std::mt19937_64 rng(5);
  std::set<std::string> keys;
  std::set<std::string> inputs;
  for (int t = 0; t < 10000; ++t) {
    const auto x = random_bits(rng, 128);
    inputs.insert(x.to_string());
    keys.insert(extract_key(x, 128, sha).to_string());
  }
  CHECK(keys.size() == inputs.size());
}

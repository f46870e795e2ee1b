#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pufgcc/bits.hpp"
#include "pufgcc/cli.hpp"
#include "pufgcc/io.hpp"

using namespace pufgcc;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "pufgcc");
  std::ostringstream out;
  std::ostringstream err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = cli::run(args);
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("pufgcc_cli_" + std::to_string(std::random_device{}()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

BitVector random_bits(std::mt19937_64& rng, std::size_t n) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, (rng() & 1U) != 0);
  return v;
}

void write_response(const std::string& path, const BitVector& bits) {
  write_file_atomic(path, encode_response(bits, format_from_extension(path)));
}

std::string without_wall_time(const std::string& report) {
  std::istringstream in(report);
  std::string line;
  std::string kept;
  while (std::getline(in, line)) {
    if (line.rfind("wall_time", 0) == 0 || line.rfind("{", 0) == 0) continue;
    kept += line + "\n";
  }
  return kept;
}

}  // namespace

TEST_CASE("enroll and reconstruct with the syndrome scheme") {
  TempDir dir;
  std::mt19937_64 rng(1);
  const auto y = random_bits(rng, 2048);
  write_response(dir / "y.bin", y);

  auto r = run({"enroll", "--response", dir / "y.bin", "--code", "gcc-2048-131", "--scheme", "syndrome",
                "--out", dir / "helper.pufs", "--key-out", dir / "key.hex"});
  REQUIRE(r.code == cli::kSuccess);
  const auto raw = read_file(dir / "helper.pufs");
  const auto helper = parse_helper(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
  CHECK(helper.code_id == "gcc-2048-131");
  CHECK(helper.payload.size() == 1917);
  const auto key = read_file(dir / "key.hex");
  CHECK(key.size() == 33);

  r = run({"reconstruct", "--response", dir / "y.bin", "--helper", dir / "helper.pufs", "--key-out",
           dir / "key2.hex"});
  REQUIRE(r.code == cli::kSuccess);
  CHECK(read_file(dir / "key2.hex") == key);

  for (int t = 0; t < 10; ++t) {
    auto noisy = y;
    for (std::size_t row = 0; row < 128; ++row) {
      for (std::size_t f = rng() % 4; f > 0; --f) noisy.flip(row * 16 + rng() % 16);
    }
    write_response(dir / "noisy.hex", noisy);
    r = run({"reconstruct", "--response", dir / "noisy.hex", "--helper", dir / "helper.pufs", "--key-out",
             dir / "key3.hex"});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(read_file(dir / "key3.hex") == key);
  }
}

TEST_CASE("random responses fail to decode and leave no key") {
  TempDir dir;
  std::mt19937_64 rng(2);
  write_response(dir / "y.bin", random_bits(rng, 2048));
  REQUIRE(run({"enroll", "--response", dir / "y.bin", "--out", dir / "h.pufs", "--key-out", dir / "k.hex"}).code ==
          0);
  for (int t = 0; t < 100; ++t) {
    write_response(dir / "other.bin", random_bits(rng, 2048));
    const auto r = run({"reconstruct", "--response", dir / "other.bin", "--helper", dir / "h.pufs", "--key-out",
                        dir / "bad.hex"});
    CHECK(r.code == cli::kDecodeFailure);
    CHECK_FALSE(fs::exists(dir / "bad.hex"));
  }
  CHECK(std::distance(fs::directory_iterator(dir.path), fs::directory_iterator()) == 4);
}

TEST_CASE("all-zero response") {
  TempDir dir;
  write_response(dir / "z.bin", BitVector(2048));
  REQUIRE(run({"enroll", "--response", dir / "z.bin", "--out", dir / "h.pufs", "--key-out", dir / "k.hex"}).code ==
          0);
  const auto raw = read_file(dir / "h.pufs");
  const auto helper = parse_helper(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
  CHECK_FALSE(helper.payload.any());
  CHECK(read_file(dir / "k.hex") == "374708fff7719dd5979ec875d56cd228\n");

  REQUIRE(run({"enroll", "--response", dir / "z.bin", "--out", dir / "h2.pufs", "--key-out", dir / "k2.hex",
               "--digest", "test"})
              .code == 0);
  CHECK(read_file(dir / "k2.hex") == "6564ff60b91f2088244cea4df1092239\n");
}

TEST_CASE("code-offset workflow") {
  TempDir dir;
  std::mt19937_64 rng(3);
  const auto y = random_bits(rng, 64);
  write_response(dir / "y.bits", y);
  auto r = run({"enroll", "--response", dir / "y.bits", "--code", "toy-64-19", "--scheme", "code-offset", "--seed",
                "9", "--out", dir / "h.pufs", "--key-out", dir / "k.hex"});
  REQUIRE(r.code == 0);
  auto noisy = y;
  noisy.flip(5);
  write_response(dir / "n.bits", noisy);
  r = run({"reconstruct", "--response", dir / "n.bits", "--helper", dir / "h.pufs", "--key-out", dir / "k2.hex"});
  REQUIRE(r.code == 0);
  CHECK(read_file(dir / "k2.hex") == read_file(dir / "k.hex"));

  r = run({"enroll", "--response", dir / "y.bits", "--code", "toy-64-19", "--scheme", "code-offset", "--seed",
           "10", "--out", dir / "h3.pufs", "--key-out", dir / "k3.hex"});
  REQUIRE(r.code == 0);
  CHECK(read_file(dir / "h3.pufs") != read_file(dir / "h.pufs"));
}

TEST_CASE("usage and parse errors") {
  TempDir dir;
  write_response(dir / "short.bits", BitVector(2047));
  auto r = run({"enroll", "--response", dir / "short.bits", "--out", dir / "h", "--key-out", dir / "k"});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("expected 2048 bits") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "h"));
  CHECK_FALSE(fs::exists(dir / "k"));

  write_response(dir / "y.bits", BitVector(64));
  r = run({"enroll", "--response", dir / "y.bits", "--code", "nope", "--out", dir / "h", "--key-out", dir / "k"});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("gcc-2048-131") != std::string::npos);
  CHECK(r.err.find("toy-64-19") != std::string::npos);

  r = run({"enroll", "--response", dir / "y.bits", "--code", "toy-64-19", "--scheme", "xor", "--out", dir / "h",
           "--key-out", dir / "k"});
  CHECK(r.code == cli::kUsage);
  r = run({"enroll", "--response", dir / "missing.bin", "--out", dir / "h", "--key-out", dir / "k"});
  CHECK(r.code == cli::kParseOrIo);
  r = run({"enroll", "--response", dir / "y.bits"});
  CHECK(r.code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);

  write_file_atomic(dir / "junk.pufs", "PUFS\x07");
  r = run({"reconstruct", "--response", dir / "y.bits", "--helper", dir / "junk.pufs", "--key-out", dir / "k"});
  CHECK(r.code == cli::kParseOrIo);
  CHECK_FALSE(fs::exists(dir / "k"));

  // Helper for the toy code, response for gcc-2048-131.
  REQUIRE(run({"enroll", "--response", dir / "y.bits", "--code", "toy-64-19", "--out", dir / "toy.pufs",
               "--key-out", dir / "toy.hex"})
              .code == 0);
  write_response(dir / "big.bin", BitVector(2048));
  r = run({"reconstruct", "--response", dir / "big.bin", "--helper", dir / "toy.pufs", "--key-out", dir / "k"});
  CHECK(r.code == cli::kUsage);
  CHECK_FALSE(fs::exists(dir / "k"));
}

TEST_CASE("simulate reports") {
  TempDir dir;
  const std::vector<std::string> args{"simulate", "--code", "toy-64-19", "--p", "0.05", "--trials", "20000",
                                      "--seed", "4"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(without_wall_time(a.out) == without_wall_time(b.out));
  for (const char* key : {"code:", "n:", "k:", "p:", "trials:", "failures:", "wrong_key:", "p_err:", "ci_low:",
                          "ci_high:", "seed:", "mode:", "wall_time:", "--- json"}) {
    CHECK(a.out.find(key) != std::string::npos);
  }

  auto r = run({"simulate", "--code", "toy-64-19", "--p", "0.05", "--trials", "2000", "--workers", "3",
                "--format", "json", "--out", dir / "report.json"});
  REQUIRE(r.code == 0);
  CHECK(read_file(dir / "report.json").find("\"workers\": 3") != std::string::npos);

  CHECK(run({"simulate", "--code", "toy-64-19", "--mode", "is", "--p", "0.1", "--p-star", "0.05"}).code ==
        cli::kUsage);
  CHECK(run({"simulate", "--code", "toy-64-19", "--mode", "is", "--p", "0.1"}).code == cli::kUsage);
  CHECK(run({"simulate", "--p", "0.7"}).code == cli::kUsage);
  CHECK(run({"simulate", "--trials", "0"}).code == cli::kUsage);
  CHECK(run({"simulate", "--mode", "quantum"}).code == cli::kUsage);
  CHECK(run({"simulate", "--p", "abc"}).code == cli::kUsage);
}

TEST_CASE("analyze and info") {
  auto r = run({"analyze", "baseline", "--p", "0.14"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("baseline_p_err: 2.53503") != std::string::npos);
  CHECK(r.out.find("baseline_length: 2226") != std::string::npos);
  CHECK(r.out.find("gcc_length: 2048") != std::string::npos);

  r = run({"analyze", "params"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("gcc-2048-131: n=2048 k=131 designed_distance=128") != std::string::npos);
  CHECK(r.out.find("rm-4-7: n=128 k=99 d=8") != std::string::npos);

  r = run({"analyze", "inner-dist", "--p", "0"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("p_correct: 1.0") != std::string::npos);
  CHECK(r.out.find("p_erasure: 0.0") != std::string::npos);

  CHECK(run({"analyze", "entropy"}).code == cli::kUsage);
  CHECK(run({"analyze", "inner-dist", "--code", "rm-1-3"}).code == cli::kUsage);

  r = run({"info"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("gcc-2048-131  n=2048 k=131 d=128") != std::string::npos);
}

TEST_CASE("process exit codes") {
  const std::string exe = PUFGCC_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("info") == 0);
  CHECK(status("--help") == 0);
  CHECK(status("analyze nothing") == 2);
  CHECK(status("reconstruct --response /nonexistent.bin --helper /nonexistent.pufs --key-out /tmp/x") == 3);
}

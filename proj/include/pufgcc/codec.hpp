#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pufgcc/bits.hpp"
#include "pufgcc/codes.hpp"
#include "pufgcc/gcc.hpp"

namespace pufgcc {

/// Uniform encode/decode view of a binary linear code, used by the secure
/// sketches, the simulators, and the CLI. `params().d` is the designed
/// distance for GC codes.
class Codec {
 public:
  virtual ~Codec() = default;

  const std::string& id() const { return id_; }
  const CodeParams& params() const { return params_; }
  std::size_t n() const { return params_.n; }
  std::size_t k() const { return params_.k; }

  virtual BitVector encode(const BitVector& info) const = 0;
  /// Recovered information bits, or nullopt on decoding failure.
  virtual std::optional<BitVector> decode(const BitVector& received) const = 0;

  /// Built on first use; thread safe.
  const BitMatrix& parity_check() const;
  const SyndromeSolver& syndrome_solver() const;

 protected:
  Codec(std::string id, CodeParams params) : id_(std::move(id)), params_(params) {}
  /// Generator rows are the encodings of the unit info vectors.
  virtual BitMatrix generator() const;

 private:
  struct Derived {
    BitMatrix parity_check;
    SyndromeSolver solver;
  };
  const Derived& derived() const;

  std::string id_;
  CodeParams params_;
  mutable std::once_flag once_;
  mutable std::unique_ptr<Derived> derived_;
};

class LinearCodec final : public Codec {
 public:
  LinearCodec(std::string id, LinearCode code, HardDecoder decoder);
  explicit LinearCodec(LinearCode code);

  BitVector encode(const BitVector& info) const override;
  std::optional<BitVector> decode(const BitVector& received) const override;

  const LinearCode& code() const { return code_; }

 protected:
  BitMatrix generator() const override { return code_.generator(); }

 private:
  LinearCode code_;
  HardDecoder decoder_;
};

class GcCodec final : public Codec {
 public:
  explicit GcCodec(GcCodeSpec spec);

  BitVector encode(const BitVector& info) const override;
  std::optional<BitVector> decode(const BitVector& received) const override;

  const GcCodeSpec& spec() const { return spec_; }

 private:
  GcCodeSpec spec_;
};

/// Identifiers accepted by make_codec(), in display order.
std::vector<std::string> codec_ids();

/// nullptr for unknown ids.
std::shared_ptr<const Codec> make_codec(std::string_view id);

}  // namespace pufgcc

#include "pufgcc/codec.hpp"

#include <functional>

namespace pufgcc {

const Codec::Derived& Codec::derived() const {
  std::call_once(once_, [this] {
    auto d = std::make_unique<Derived>();
    d->parity_check = nullspace_basis(generator());
    d->solver = SyndromeSolver(d->parity_check);
    derived_ = std::move(d);
  });
  return *derived_;
}

const BitMatrix& Codec::parity_check() const { return derived().parity_check; }
const SyndromeSolver& Codec::syndrome_solver() const { return derived().solver; }

BitMatrix Codec::generator() const {
  BitMatrix g(k(), n());
  BitVector unit(k());
  for (std::size_t i = 0; i < k(); ++i) {
    unit.set(i);
    g.set_row(i, encode(unit));
    unit.set(i, false);
  }
  return g;
}

LinearCodec::LinearCodec(std::string id, LinearCode code, HardDecoder decoder)
    : Codec(std::move(id), code.params()), code_(std::move(code)), decoder_(std::move(decoder)) {}

LinearCodec::LinearCodec(LinearCode code)
    : LinearCodec(code.label(), code, HardDecoder::preferred(code)) {}

BitVector LinearCodec::encode(const BitVector& info) const { return pufgcc::encode(code_, info); }

std::optional<BitVector> LinearCodec::decode(const BitVector& received) const {
  auto out = decoder_(received);
  if (!out.unique()) return std::nullopt;
  return std::move(out.info);
}

GcCodec::GcCodec(GcCodeSpec spec) : Codec(spec.id(), spec.params()), spec_(std::move(spec)) {}

BitVector GcCodec::encode(const BitVector& info) const { return gc_encode_flat(spec_, info); }

std::optional<BitVector> GcCodec::decode(const BitVector& received) const {
  return gc_decode_flat(spec_, received);
}

namespace {

using Factory = std::function<std::shared_ptr<const Codec>()>;

std::shared_ptr<const Codec> rm_codec(const char* id, int r, int m) {
  const LinearCode code = rm_code(r, m);
  return std::make_shared<LinearCodec>(id, code, HardDecoder::preferred(code));
}

const std::vector<std::pair<std::string, Factory>>& registry() {
  static const std::vector<std::pair<std::string, Factory>> entries = {
      {"gcc-2048-131", [] { return std::make_shared<GcCodec>(puf_gcc_2048()); }},
      {"toy-64-19", [] { return std::make_shared<GcCodec>(toy_gcc()); }},
      {"rm-1-3", [] { return rm_codec("rm-1-3", 1, 3); }},
      {"rm-2-3", [] { return rm_codec("rm-2-3", 2, 3); }},
      {"rm-1-4", [] { return rm_codec("rm-1-4", 1, 4); }},
      {"rm-1-7", [] { return rm_codec("rm-1-7", 1, 7); }},
      {"rm-4-7", [] { return rm_codec("rm-4-7", 4, 7); }},
  };
  return entries;
}

}  // namespace

std::vector<std::string> codec_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, factory] : registry()) ids.push_back(id);
  return ids;
}

std::shared_ptr<const Codec> make_codec(std::string_view id) {
  for (const auto& [name, factory] : registry()) {
    if (name == id) return factory();
  }
  return nullptr;
}

}  // namespace pufgcc

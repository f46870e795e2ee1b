#include "pufgcc/cli.hpp"

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pufgcc/codec.hpp"
#include "pufgcc/error.hpp"
#include "pufgcc/io.hpp"
#include "pufgcc/sim.hpp"
#include "pufgcc/sketch.hpp"

namespace pufgcc::cli {

namespace {

using nlohmann::ordered_json;

class DecodeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::shared_ptr<const Codec> require_codec(const std::string& id) {
  auto codec = make_codec(id);
  if (!codec) {
    std::string known;
    for (const auto& k : codec_ids()) known += (known.empty() ? "" : ", ") + k;
    throw UsageError("unknown code id '" + id + "'; registered codes: " + known);
  }
  return codec;
}

Digest digest_by_name(const std::string& name) {
  if (name == "sha256") return sha256_digest();
  if (name == "test") return test_digest();
  throw UsageError("unknown digest '" + name + "' (sha256, test)");
}

SketchScheme scheme_by_name(const std::string& name) {
  if (name == "syndrome") return SketchScheme::Syndrome;
  if (name == "code-offset") return SketchScheme::CodeOffset;
  throw UsageError("unknown scheme '" + name + "' (syndrome, code-offset)");
}

BitVector load_response(const std::string& path, const std::string& format, const Codec& codec) {
  const ResponseFormat fmt = format.empty() ? format_from_extension(path) : parse_format_name(format);
  BitVector y = decode_response(read_file(path), fmt);
  if (y.size() != codec.n()) {
    throw UsageError("response '" + path + "': expected " + std::to_string(codec.n()) + " bits, got " +
                     std::to_string(y.size()));
  }
  return y;
}

std::string key_file_contents(const BitVector& key) { return to_hex(key.to_bytes()) + "\n"; }

// Key-value lines followed by the same content as one JSON object.
std::string render_report(const ordered_json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (!format.empty() && format != "text") throw UsageError("unknown report format '" + format + "' (text, json)");
  std::ostringstream out;
  auto scalar = [](const ordered_json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (const auto& [key, value] : report.items()) {
    if (value.is_array()) {
      // One line per named entry, e.g. the code table.
      for (const auto& entry : value) {
        if (!entry.is_object() || !entry.contains("code")) continue;
        out << scalar(entry["code"]) << ":";
        for (const auto& [k, v] : entry.items()) {
          if (k != "code" && v.is_primitive()) out << " " << k << "=" << scalar(v);
        }
        out << "\n";
      }
    } else if (!value.is_object()) {
      out << key << ": " << scalar(value) << "\n";
    }
  }
  out << "--- json\n" << report.dump() << "\n";
  return out.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(out_path, text);
  }
}

ordered_json sim_report_json(const SimReport& r) {
  ordered_json j;
  j["code"] = r.code;
  j["n"] = r.n;
  j["k"] = r.k;
  j["mode"] = r.mode;
  j["p"] = r.p;
  if (r.mode == "is") j["p_star"] = r.p_star;
  j["trials"] = r.trials;
  j["failures"] = r.failures;
  j["wrong_key"] = r.wrong_key;
  j["p_err"] = r.p_err;
  j["ci_low"] = r.ci_low;
  j["ci_high"] = r.ci_high;
  if (r.mode == "is") j["relative_error"] = r.relative_error;
  j["seed"] = r.seed;
  j["workers"] = r.workers;
  j["wall_time"] = r.wall_time;
  return j;
}

ordered_json code_params_json(const Codec& codec) {
  ordered_json j;
  j["code"] = codec.id();
  j["n"] = codec.n();
  j["k"] = codec.k();
  if (const auto* gc = dynamic_cast<const GcCodec*>(&codec)) {
    const auto& spec = gc->spec();
    j["designed_distance"] = spec.designed_distance();
    j["inner"] = spec.inner().label();
    j["inner_d"] = spec.inner().d();
    j["subcode_d"] = spec.partition().subcode().d();
    ordered_json outer = ordered_json::array();
    for (const auto& c : spec.label_codes()) {
      outer.push_back({{"role", "label"}, {"code", c.label()}, {"n", c.n()}, {"k", c.k()}, {"d", c.d()}});
    }
    const auto& e = spec.element_code();
    outer.push_back({{"role", "element"}, {"code", e.label()}, {"n", e.n()}, {"k", e.k()}, {"d", e.d()}});
    j["outer"] = outer;
  } else {
    j["d"] = codec.params().d;
  }
  return j;
}

// ---------------------------------------------------------------- commands

struct EnrollArgs {
  std::string response, code = "gcc-2048-131", scheme = "syndrome", out, key_out, format,
                        digest = "sha256";
  std::size_t key_bits = 128;
  std::uint64_t seed = 1;
};

int cmd_enroll(const EnrollArgs& a) {
  const auto codec = require_codec(a.code);
  const BitVector y = load_response(a.response, a.format, *codec);
  const Digest digest = digest_by_name(a.digest);
  HelperData helper;
  if (scheme_by_name(a.scheme) == SketchScheme::Syndrome) {
    helper = sketch(*codec, y);
  } else {
    std::mt19937_64 rng(stream_seed(a.seed, 0));
    helper = code_offset_sketch(*codec, y, rng).helper;
  }
  const BitVector key = extract_key(key_material(secret_info(*codec, y, helper)), a.key_bits, digest);
  const auto bytes = serialize_helper(helper);
  write_file_atomic(a.out, std::string(bytes.begin(), bytes.end()));
  write_file_atomic(a.key_out, key_file_contents(key));
  std::cerr << "enrolled " << codec->id() << ": helper " << helper.payload.size() << " bits\n";
  return kSuccess;
}

struct ReconstructArgs {
  std::string response, helper, key_out, format, digest = "sha256";
  std::size_t key_bits = 128;
};

int cmd_reconstruct(const ReconstructArgs& a) {
  const std::string raw = read_file(a.helper);
  const HelperData helper =
      parse_helper(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
  const auto codec = require_codec(helper.code_id);
  if (helper.payload.size() != helper_payload_bits(*codec, helper.scheme)) {
    throw ParseError("helper payload has " + std::to_string(helper.payload.size()) + " bits, code " +
                     codec->id() + " needs " + std::to_string(helper_payload_bits(*codec, helper.scheme)));
  }
  const BitVector y_prime = load_response(a.response, a.format, *codec);
  const Digest digest = digest_by_name(a.digest);
  const auto y = recover_any(*codec, y_prime, helper);
  if (!y) throw DecodeFailure("decoding failed; no key written");
  const BitVector key = extract_key(key_material(secret_info(*codec, *y, helper)), a.key_bits, digest);
  write_file_atomic(a.key_out, key_file_contents(key));
  return kSuccess;
}

struct SimulateArgs {
  std::string code = "gcc-2048-131", mode = "mc", out, format;
  double p = 0.14;
  double p_star = -1.0;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

int cmd_simulate(const SimulateArgs& a) {
  const auto codec = require_codec(a.code);
  validate_probability(a.p, "--p");
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  SimReport report;
  if (a.mode == "mc") {
    report = monte_carlo_block_error(*codec, a.p, a.trials, a.seed, a.workers);
  } else if (a.mode == "is") {
    if (a.p_star < 0) throw UsageError("--mode is requires --p-star");
    validate_probability(a.p_star, "--p-star");
    if (a.p_star < a.p) throw UsageError("--p-star must be >= --p");
    report = importance_sampled_block_error(*codec, a.p, a.p_star, a.trials, a.seed, a.workers);
  } else {
    throw UsageError("unknown mode '" + a.mode + "' (mc, is)");
  }
  emit(render_report(sim_report_json(report), a.format), a.out);
  return kSuccess;
}

struct AnalyzeArgs {
  std::string target, code = "gcc-2048-131", out, format;
  double p = 0.14;
};

ordered_json analyze_baseline(double p) {
  const BaselineScheme base;
  const auto gcc = require_codec("gcc-2048-131");
  ordered_json j;
  j["target"] = "baseline";
  j["p"] = p;
  j["baseline_code"] = "BCH(318,174,35) + Rep(7,1,7)";
  j["baseline_p_err"] = baseline_bch_rep_perr(p);
  j["baseline_length"] = base.length();
  j["baseline_key_bits"] = base.outer_k;
  j["baseline_decoder_field"] = "GF(2^9)";
  j["gcc_code"] = gcc->id();
  j["gcc_length"] = gcc->n();
  j["gcc_key_bits"] = gcc->k();
  j["gcc_decoder_field"] = "GF(2)";
  return j;
}

ordered_json analyze_inner(const std::string& code_id, double p) {
  const auto codec = require_codec(code_id);
  const auto* gc = dynamic_cast<const GcCodec*>(codec.get());
  if (gc == nullptr) throw UsageError("inner-dist needs a generalized concatenated code");
  const auto& part = gc->spec().partition();
  const auto dist = inner_outcome_distribution(part.parent_codebook(), p);
  double correct = 0, correct_label = 0;
  ordered_json by_distance = ordered_json::object();
  for (const auto& o : dist.outcomes) {
    if (o.codeword == 0) {
      correct += o.probability;
      by_distance[std::to_string(o.distance)] = o.probability;
    }
    if (part.label_of(o.codeword) == 0) correct_label += o.probability;
  }
  ordered_json j;
  j["target"] = "inner-dist";
  j["code"] = codec->id();
  j["inner"] = part.parent().label();
  j["p"] = p;
  j["p_correct"] = correct;
  j["p_correct_label"] = correct_label;
  j["p_erasure"] = dist.erasure;
  j["p_wrong_label"] = 1.0 - correct_label - dist.erasure;
  j["total"] = dist.total();
  j["correct_by_distance"] = by_distance;
  return j;
}

int cmd_analyze(const AnalyzeArgs& a) {
  ordered_json j;
  if (a.target == "baseline") {
    validate_probability(a.p, "--p");
    j = analyze_baseline(a.p);
  } else if (a.target == "inner-dist") {
    validate_probability(a.p, "--p");
    j = analyze_inner(a.code, a.p);
  } else if (a.target == "params") {
    j["target"] = "params";
    ordered_json codes = ordered_json::array();
    for (const auto& id : codec_ids()) codes.push_back(code_params_json(*require_codec(id)));
    j["codes"] = codes;
  } else {
    throw UsageError("unknown analyze target '" + a.target + "' (baseline, inner-dist, params)");
  }
  emit(render_report(j, a.format), a.out);
  return kSuccess;
}

int cmd_info() {
  for (const auto& id : codec_ids()) {
    const auto codec = require_codec(id);
    std::cout << id << "  n=" << codec->n() << " k=" << codec->k() << " d=" << codec->params().d << "\n";
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"PUF key regeneration with generalized concatenated codes", "pufgcc"};
  app.require_subcommand(1);

  EnrollArgs enroll;
  auto* e = app.add_subcommand("enroll", "derive helper data and a key from a response");
  e->add_option("--response", enroll.response, "response file (.bin, .hex, .bits)")->required();
  e->add_option("--code", enroll.code, "code id");
  e->add_option("--scheme", enroll.scheme, "syndrome | code-offset");
  e->add_option("--out", enroll.out, "helper data output file")->required();
  e->add_option("--key-out", enroll.key_out, "key output file (hex)")->required();
  e->add_option("--format", enroll.format, "response format override: bin | hex | bits");
  e->add_option("--digest", enroll.digest, "sha256 | test");
  e->add_option("--key-bits", enroll.key_bits, "key length in bits");
  e->add_option("--seed", enroll.seed, "seed for the code-offset draw");

  ReconstructArgs recon;
  auto* r = app.add_subcommand("reconstruct", "regenerate the key from a noisy response");
  r->add_option("--response", recon.response, "response file")->required();
  r->add_option("--helper", recon.helper, "helper data file")->required();
  r->add_option("--key-out", recon.key_out, "key output file (hex)")->required();
  r->add_option("--format", recon.format, "response format override: bin | hex | bits");
  r->add_option("--digest", recon.digest, "sha256 | test");
  r->add_option("--key-bits", recon.key_bits, "key length in bits");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "estimate the block error rate over a BSC");
  s->add_option("--code", sim.code, "code id");
  s->add_option("--p", sim.p, "crossover probability");
  s->add_option("--trials", sim.trials, "number of trials");
  s->add_option("--seed", sim.seed, "base seed");
  s->add_option("--workers", sim.workers, "worker threads");
  s->add_option("--mode", sim.mode, "mc | is");
  s->add_option("--p-star", sim.p_star, "sampling crossover probability for --mode is");
  s->add_option("--out", sim.out, "report file (default stdout)");
  s->add_option("--format", sim.format, "text | json");

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "analytic and exact reference values");
  a->add_option("target", an.target, "baseline | inner-dist | params")->required();
  a->add_option("--p", an.p, "crossover probability");
  a->add_option("--code", an.code, "code id");
  a->add_option("--out", an.out, "report file (default stdout)");
  a->add_option("--format", an.format, "text | json");

  app.add_subcommand("info", "list registered codes");

  std::vector<const char*> argv;
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kUsage;
  }

  try {
    if (*e) return cmd_enroll(enroll);
    if (*r) return cmd_reconstruct(recon);
    if (*s) return cmd_simulate(sim);
    if (*a) return cmd_analyze(an);
    return cmd_info();
  } catch (const UsageError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kParseOrIo;
  } catch (const DecodeFailure& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kDecodeFailure;
  }
}

}  // namespace pufgcc::cli

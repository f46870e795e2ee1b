// Python module pufgcc._core. Bit vectors cross the boundary as '0'/'1'
// strings, with bit 0 first.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>

#include "pufgcc/codec.hpp"
#include "pufgcc/error.hpp"
#include "pufgcc/io.hpp"
#include "pufgcc/sim.hpp"
#include "pufgcc/sketch.hpp"

namespace py = pybind11;
using namespace pufgcc;

namespace {

std::shared_ptr<const Codec> codec_or_throw(const std::string& id) {
  auto codec = make_codec(id);
  if (!codec) throw py::value_error("unknown code '" + id + "'");
  return codec;
}

std::optional<std::string> maybe_string(const std::optional<BitVector>& v) {
  if (!v) return std::nullopt;
  return v->to_string();
}

py::dict report_dict(const SimReport& r) {
  py::dict d;
  d["code"] = r.code;
  d["n"] = r.n;
  d["k"] = r.k;
  d["mode"] = r.mode;
  d["p"] = r.p;
  d["p_star"] = r.p_star;
  d["trials"] = r.trials;
  d["failures"] = r.failures;
  d["wrong_key"] = r.wrong_key;
  d["p_err"] = r.p_err;
  d["ci_low"] = r.ci_low;
  d["ci_high"] = r.ci_high;
  d["relative_error"] = r.relative_error;
  d["seed"] = r.seed;
  d["workers"] = r.workers;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("codec_ids", &codec_ids);

  py::class_<Codec, std::shared_ptr<Codec>>(m, "Codec")
      .def(py::init([](const std::string& id) { return std::const_pointer_cast<Codec>(codec_or_throw(id)); }),
           py::arg("id"))
      .def_property_readonly("id", &Codec::id)
      .def_property_readonly("n", &Codec::n)
      .def_property_readonly("k", &Codec::k)
      .def_property_readonly("d", [](const Codec& c) { return c.params().d; })
      .def("encode", [](const Codec& c, const std::string& info) {
        return c.encode(BitVector::from_string(info)).to_string();
      })
      .def("decode", [](const Codec& c, const std::string& received) {
        return maybe_string(c.decode(BitVector::from_string(received)));
      })
      .def("__repr__", [](const Codec& c) {
        return "Codec('" + c.id() + "', n=" + std::to_string(c.n()) + ", k=" + std::to_string(c.k()) + ")";
      });

  m.def(
      "sketch",
      [](const Codec& c, const std::string& y) {
        const auto b = serialize_helper(sketch(c, BitVector::from_string(y)));
        return py::bytes(std::string(b.begin(), b.end()));
      },
      py::arg("codec"), py::arg("y"), "Syndrome helper data as helper-file bytes.");

  m.def(
      "recover",
      [](const Codec& c, const std::string& y_prime, const py::bytes& helper) {
        const std::string raw = helper;
        const std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
        return maybe_string(recover_any(c, BitVector::from_string(y_prime), parse_helper(bytes)));
      },
      py::arg("codec"), py::arg("y_prime"), py::arg("helper"));

  m.def(
      "derive_key",
      [](const Codec& c, const std::string& y, const py::bytes& helper, std::size_t key_bits,
         const std::string& digest) {
        const std::string raw = helper;
        const std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
        const auto info = secret_info(c, BitVector::from_string(y), parse_helper(bytes));
        const auto d = digest == "test" ? test_digest() : sha256_digest();
        return to_hex(extract_key(key_material(info), key_bits, d).to_bytes());
      },
      py::arg("codec"), py::arg("y"), py::arg("helper"), py::arg("key_bits") = 128,
      py::arg("digest") = "sha256");

  m.def(
      "simulate",
      [](const Codec& c, double p, std::uint64_t trials, std::uint64_t seed, unsigned workers,
         std::optional<double> p_star) {
        SimReport r;
        {
          py::gil_scoped_release release;
          r = p_star ? importance_sampled_block_error(c, p, *p_star, trials, seed, workers)
                     : monte_carlo_block_error(c, p, trials, seed, workers);
        }
        return report_dict(r);
      },
      py::arg("codec"), py::arg("p"), py::arg("trials"), py::arg("seed") = 1, py::arg("workers") = 1,
      py::arg("p_star") = py::none());

  m.def("clopper_pearson", &clopper_pearson, py::arg("successes"), py::arg("trials"),
        py::arg("confidence") = 0.95);
  m.def("baseline_perr", &baseline_bch_rep_perr, py::arg("p"));
}

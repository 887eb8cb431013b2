#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "corridorlab/corridor.hpp"
#include "corridorlab/errors.hpp"
#include "corridorlab/graphmap.hpp"
#include "corridorlab/isoperimetry.hpp"
#include "corridorlab/strata.hpp"

namespace py = pybind11;
using namespace corridorlab;

namespace {

  std::vector<std::string> names(Alphabet const& a,
                                 std::vector<std::uint32_t> const& xs) {
    std::vector<std::string> out;
    for (auto x : xs) {
      out.push_back(a.name(x));
    }
    return out;
  }

  py::dict classify_dict(Automorphism const& phi) {
    auto const& a   = phi.alphabet();
    auto        rep = classify(phi);
    py::dict    out;
    for (auto const& l : rep.letters) {
      py::dict d;
      d["supp"]    = names(a, l.supp);
      d["stratum"] = names(a, l.stratum);
      d["kind"]    = to_string(l.kind);
      d["growth"]  = to_string(l.growth.kind);
      d["degree"]  = l.growth.degree ? py::object(py::int_(*l.growth.degree))
                                     : py::object(py::none());
      out[py::str(a.name(l.index))] = d;
    }
    return out;
  }

  NormVariant variant(std::string const& v) {
    if (v == "word") {
      return NormVariant::word;
    }
    if (v == "cyclic") {
      return NormVariant::cyclic;
    }
    throw std::invalid_argument("variant must be word or cyclic");
  }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc()               = "corridorlab core bindings";
  m.attr("__version__") = CORRIDORLAB_VERSION;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base);
  py::register_exception<NotIdentity>(m, "NotIdentity", base);
  py::register_exception<NotPositive>(m, "NotPositive", base);
  py::register_exception<InverseMismatch>(m, "InverseMismatch", base);
  py::register_exception<NoWitness>(m, "NoWitness", base);

  py::class_<Automorphism>(m, "Automorphism")
      .def_property_readonly("rank", &Automorphism::rank)
      .def_property_readonly("generators",
                             [](Automorphism const& phi) {
                               return phi.alphabet().names();
                             })
      .def_property_readonly("L", &Automorphism::L)
      .def_property_readonly("L_inv", &Automorphism::L_inv)
      .def_property_readonly("B", &Automorphism::B)
      .def("apply",
           [](Automorphism const& phi, std::string const& w, long k) {
             auto const& a = phi.alphabet();
             return a.format(apply_power(phi, a.parse(w), k));
           },
           py::arg("word"), py::arg("k") = 1)
      .def("is_positive", [](Automorphism const& phi) { return is_positive(phi); })
      .def("format", [](Automorphism const& phi) { return format_automorphism(phi); })
      .def("__repr__", [](Automorphism const& phi) {
        return "<Automorphism of rank " + std::to_string(phi.rank()) + ">";
      });

  m.def("parse_automorphism", &parse_automorphism, py::arg("text"));
  m.def("load_automorphism", &load_automorphism, py::arg("path"));
  m.def("classify", &classify_dict, py::arg("phi"));
  m.def("condition_power",
        [](Automorphism const& phi, std::size_t k_max) {
          auto     c = condition_power(phi, k_max);
          py::dict d;
          d["k"]      = c.k;
          d["passed"] = c.passed();
          return d;
        },
        py::arg("phi"), py::arg("k_max") = 64);

  py::class_<MappingTorus>(m, "MappingTorus")
      .def(py::init<Automorphism, std::size_t>(), py::arg("phi"),
           py::arg("symbol_cap") = kDefaultSymbolCap)
      .def("relators",
           [](MappingTorus const& P) {
             std::vector<std::string> out;
             for (auto const& r : P.relators()) {
               out.push_back(P.format(r));
             }
             return out;
           })
      .def("normal_form",
           [](MappingTorus const& P, std::string const& w) {
             auto nf = to_normal_form(P, P.parse(w));
             return py::make_tuple(P.alphabet().format(nf.fiber), nf.exponent);
           })
      .def("is_identity",
           [](MappingTorus const& P, std::string const& w) {
             return is_identity(P, P.parse(w));
           })
      .def("min_area",
           [](MappingTorus const& P, std::string const& w, std::size_t t_cap) {
             auto     c = min_area(P, P.parse(w), t_cap);
             py::dict d;
             std::vector<std::string> bottoms;
             for (auto const& b : c.bottoms) {
               bottoms.push_back(P.alphabet().format(b));
             }
             d["area"]    = c.area;
             d["pairing"] = c.pairing;
             d["bottoms"] = bottoms;
             return d;
           },
           py::arg("word"), py::arg("t_cap") = kDefaultTCap)
      .def("bracketing",
           [](MappingTorus const& P, std::string const& w) {
             auto     b = t_complete_bracketing(P, P.parse(w));
             py::list brackets;
             for (auto const& br : b.brackets) {
               py::dict x;
               x["open"]  = br.open;
               x["close"] = br.close;
               x["value"] = P.alphabet().format(br.value);
               x["norm"]  = br.norm;
               brackets.append(x);
             }
             py::dict d;
             d["complete"]         = b.complete;
             d["max_content_norm"] = b.max_content_norm;
             d["brackets"]         = brackets;
             return d;
           })
      .def("sample_null_words",
           [](MappingTorus const& P, std::size_t n, std::size_t count,
              std::uint64_t seed) {
             std::vector<std::string> out;
             for (auto const& w : sample_null_words(P, n, count, seed)) {
               out.push_back(P.format(w));
             }
             return out;
           },
           py::arg("n"), py::arg("count"), py::arg("seed"))
      .def("dehn_scan",
           [](MappingTorus const& P, std::vector<std::string> const& words,
              std::size_t n_min, std::size_t n_max, std::size_t t_cap) {
             std::vector<MixedWord> ws;
             for (auto const& w : words) {
               ws.push_back(P.parse(w));
             }
             auto     s = dehn_scan(P, ws, n_min, n_max, t_cap);
             py::list rows;
             for (auto const& r : s.rows) {
               rows.append(py::make_tuple(r.n, r.max_area, r.mean_area, r.exact));
             }
             py::dict d;
             d["rows"]     = rows;
             d["slope"]    = s.slope ? py::object(py::float_(*s.slope))
                                     : py::object(py::none());
             d["failures"] = s.failures;
             return d;
           },
           py::arg("words"), py::arg("n_min") = 0,
           py::arg("n_max") = std::size_t(-1), py::arg("t_cap") = kDefaultTCap);

  m.def("brinkmann_check",
        [](Automorphism const& phi, std::vector<std::string> const& words,
           std::size_t N_max, std::string const& v) {
          std::vector<Word> ws;
          for (auto const& w : words) {
            ws.push_back(phi.alphabet().parse(w));
          }
          auto r = brinkmann_check(phi, ws, N_max, variant(v));
          return py::make_tuple(r.K_num, r.K_den);
        },
        py::arg("phi"), py::arg("words"), py::arg("N_max"),
        py::arg("variant") = "word");

  m.def("bcl_audit",
        [](Automorphism const& phi, std::size_t count, std::size_t max_len,
           std::uint64_t seed) {
          auto     a = bcl_audit(phi, count, max_len, seed);
          py::dict d;
          d["corridors"]  = a.corridors;
          d["bound"]      = a.bound;
          d["longest"]    = a.longest;
          d["violations"] = a.violations.size();
          return d;
        },
        py::arg("phi"), py::arg("count"), py::arg("max_len"), py::arg("seed"));

  m.def("corridor_lengths",
        [](Automorphism const& phi, std::string const& w, std::size_t steps) {
          MappingTorus P(phi);
          return corridor_length_series(build_stack(P, phi.alphabet().parse(w), steps));
        },
        py::arg("phi"), py::arg("word"), py::arg("steps"));

  m.def("bead_decomposition",
        [](Automorphism const& phi, std::string const& path, std::size_t J) {
          auto f = from_substitution(phi);
          auto d = bead_decomposition(f, parse_path(f.graph(), path), J);
          std::vector<std::pair<std::string, std::string>> beads;
          for (auto const& b : d.beads) {
            beads.emplace_back(phi.alphabet().format(b.path), to_string(b.tag));
          }
          return py::make_tuple(d.accepted(), beads);
        },
        py::arg("phi"), py::arg("path"), py::arg("J") = 4);
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maderkit/bench.hpp"
#include "maderkit/canonical.hpp"
#include "maderkit/coloring.hpp"
#include "maderkit/family.hpp"
#include "maderkit/subdivision.hpp"
#include "maderkit/witness.hpp"

namespace py = pybind11;
using namespace maderkit;

namespace {

Digraph from_arcs(int order, const std::vector<std::pair<int, int>>& arcs) {
  Digraph d(order);
  for (const auto& [u, v] : arcs) d.add_arc(u, v);
  return d;
}

std::vector<std::pair<int, int>> arc_list(const Digraph& d) {
  std::vector<std::pair<int, int>> out;
  for (const Arc& a : d.arcs()) out.emplace_back(a.tail, a.head);
  return out;
}

HPattern pattern_of(const std::string& name) {
  if (name == "H1") return HPattern::kH1;
  if (name == "H2") return HPattern::kH2;
  throw py::value_error("pattern must be H1 or H2");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dichromatic number, subdivision search and Mader-number checks";

  py::register_exception<InternalInconsistency>(m, "InternalInconsistency", PyExc_RuntimeError);
  py::register_exception<PreconditionViolated>(m, "PreconditionViolated", PyExc_RuntimeError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_ValueError);

  py::class_<Digraph>(m, "Digraph")
      .def(py::init<int>(), py::arg("order") = 0)
      .def(py::init(&from_arcs), py::arg("order"), py::arg("arcs"))
      .def_static("parse", [](const std::string& text) { return parse_digraph(text); })
      .def("add_arc", &Digraph::add_arc)
      .def("remove_arc", &Digraph::remove_arc)
      .def("has_arc", &Digraph::has_arc)
      .def_property_readonly("order", &Digraph::order)
      .def_property_readonly("arc_count", &Digraph::arc_count)
      .def("arcs", &arc_list)
      .def("reverse", [](const Digraph& d) { return reverse(d); })
      .def("to_text", [](const Digraph& d) { return to_text(d); })
      .def("__eq__", [](const Digraph& a, const Digraph& b) { return a == b; })
      .def("__repr__", [](const Digraph& d) {
        return "<Digraph order=" + std::to_string(d.order()) + " arcs=" + std::to_string(d.arc_count()) + ">";
      });

  m.def("complete_biorientation", &complete_biorientation);
  m.def("directed_cycle", &directed_cycle);
  m.def("directed_path", &directed_path);
  m.def("pattern_h1", &pattern_h1);
  m.def("pattern_h2", &pattern_h2);
  m.def("pattern_h3", &pattern_h3);
  m.def("bioriented_c4", &bioriented_c4);

  m.def("canonical_form", [](const Digraph& d) {
    const CanonicalKey k = canonical_form(d);
    return py::make_tuple(k.order, k.code);
  });
  m.def("isomorphic", &isomorphic);
  m.def("count_digraph_classes", &count_digraph_classes);

  m.def(
      "dichromatic_number",
      [](const Digraph& d) {
        const DichromaticResult r = dichromatic_number(d);
        return py::make_tuple(r.chi, r.witness.color);
      },
      "(chi, colour per vertex, 1-based)");
  m.def("is_acyclic_coloring", [](const Digraph& d, int k, const std::vector<int>& color) {
    return is_acyclic_coloring(d, AcyclicColoring{k, color});
  });

  m.def(
      "contains_subdivision",
      [](const Digraph& host, const Digraph& pattern) -> std::optional<std::string> {
        if (const auto e = contains_subdivision(host, pattern)) return embedding_to_json(*e);
        return std::nullopt;
      },
      "Embedding JSON, or None");
  m.def("verify_embedding", [](const Digraph& host, const Digraph& pattern, const std::string& json) {
    const EmbeddingCheck c = verify_embedding(host, pattern, embedding_from_json(json));
    return py::make_tuple(c.ok, c.clause);
  });

  m.def(
      "certify_h",
      [](const Digraph& d, const std::string& pattern) {
        const CertifyOutcome out = certify_h(d, pattern_of(pattern));
        py::dict r;
        if (out.is_coloring()) {
          r["certificate"] = "coloring";
          r["color"] = out.coloring().color;
        } else {
          r["certificate"] = "subdivision";
          r["embedding"] = embedding_to_json(out.embedding());
        }
        r["trace"] = out.trace;
        return r;
      },
      py::arg("digraph"), py::arg("pattern") = "H1");

  m.def(
      "in_family",
      [](const Digraph& f, int slack) -> std::optional<std::string> {
        if (const auto d = in_family(f, slack)) return derivation_to_json(*d);
        return std::nullopt;
      },
      py::arg("pattern"), py::arg("slack") = 0);
  m.def("replay", [](const std::string& json) { return replay(derivation_from_json(json)); });

  m.def("bound_general", py::overload_cast<const Digraph&>(&bound_general));
  m.def("bound_bicomplete", &bound_bicomplete);

  m.def(
      "mader_campaign",
      [](const Digraph& f, int n_max, std::optional<std::pair<std::uint64_t, std::size_t>> sample,
         const std::string& cache_dir, unsigned workers) {
        std::optional<SampleMode> mode;
        if (sample) mode = SampleMode{sample->first, sample->second};
        CampaignReport r;
        {
          py::gil_scoped_release release;
          r = mader_campaign(f, n_max, mode, CampaignOptions{cache_dir, workers});
        }
        return report_to_json(r);
      },
      py::arg("pattern"), py::arg("n_max"), py::arg("sample") = py::none(), py::arg("cache_dir") = "",
      py::arg("workers") = 0, "Schema-1 report JSON");
  m.def(
      "lemma_suite",
      [](int n_max, std::optional<std::pair<std::uint64_t, std::size_t>> sample) {
        std::optional<SampleMode> mode;
        if (sample) mode = SampleMode{sample->first, sample->second};
        return lemma_report_to_json(lemma_suite(n_max, mode));
      },
      py::arg("n_max"), py::arg("sample") = py::none());
}

// Python bindings. Structured results cross the boundary as JSON and come
// back as plain dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "spectra/corpus.hpp"
#include "spectra/dimension.hpp"
#include "spectra/dsl.hpp"
#include "spectra/report.hpp"
#include "spectra/rules.hpp"

namespace py = pybind11;
using namespace spectra;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_python(const py::handle& obj) {
  return nlohmann::json::parse(
      py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

ExtNat ext_from_python(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) {
    if (auto v = parse_ext_nat(obj.cast<std::string>())) return *v;
    throw InvalidArgument("expected a natural number or \"inf\"");
  }
  if (py::isinstance<py::float_>(obj)) {
    const double d = obj.cast<double>();
    if (std::isinf(d) && d > 0) return ExtNat::inf();
    throw InvalidArgument("only math.inf is accepted as a float");
  }
  const long long n = obj.cast<long long>();
  if (n < 0) throw InvalidArgument("negative value");
  return ExtNat(static_cast<std::uint64_t>(n));
}

py::object ext_to_python(const ExtNat& e) {
  if (e.is_inf()) return py::float_(INFINITY);
  return py::int_(e.value());
}

SpectralPoset poset_arg(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) return load_poset(obj.cast<std::string>());
  return poset_from_json(from_python(obj));
}

BaseField base_field_arg(const std::string& alg_closed) { return BaseField{parse_tristate(alg_closed)}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Prime-spectrum properties and Krull dimensions of k-algebra constructions";
  m.attr("REPORT_SCHEMA") = kReportSchema;

  auto base = py::register_exception<Error>(m, "SpectraError", PyExc_ValueError);
  // The module keeps these types alive; the translator holds borrowed handles
  // so nothing is released after interpreter shutdown.
  static py::handle parse_error =
      py::exception<ParseError>(m, "ParseError", base.ptr()).release();
  static py::handle contradiction =
      py::exception<ContradictionError>(m, "ContradictionError", base.ptr()).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::object err = parse_error(e.what());
      err.attr("line") = e.line();
      err.attr("column") = e.column();
      err.attr("expected") = e.expected();
      PyErr_SetObject(parse_error.ptr(), err.ptr());
    } catch (const ContradictionError& e) {
      py::object err = contradiction(e.what());
      err.attr("existing") = to_python(e.existing());
      err.attr("incoming") = to_python(e.incoming());
      PyErr_SetObject(contradiction.ptr(), err.ptr());
    }
  });

  m.def(
      "analyze",
      [](const std::string& text, const std::string& base_field_alg_closed, bool trace) {
        AnalyzeOptions options;
        options.base_field = base_field_arg(base_field_alg_closed);
        options.trace = trace;
        return to_python(report_json(run_analysis(text, options), options));
      },
      py::arg("text"), py::arg("base_field_alg_closed") = "unknown", py::arg("trace") = false,
      "Parse, infer to the fixpoint and return the report as a dict.");

  m.def(
      "canonical",
      [](const std::string& text) { return print_input(parse_input(text)); },
      py::arg("text"), "Canonical form of a DSL input.");

  m.def(
      "check_poset",
      [](const py::object& poset, const std::string& property) {
        const SpectralPoset p = poset_arg(poset);
        return to_string(p.check_property(parse_poset_property(property)));
      },
      py::arg("poset"), py::arg("property"),
      "\"true\", \"false\" or \"unknown\" for P1, P2, Q1, Q2, MPC, CATENARIAN or S_RING.");

  m.def(
      "heights",
      [](const py::object& poset) {
        const SpectralPoset p = poset_arg(poset);
        py::dict out;
        for (const PrimeNode& n : p.nodes()) out[py::str(n.id)] = ext_to_python(p.height(n.id));
        return out;
      },
      py::arg("poset"));

  m.def(
      "saturated_chain_lengths",
      [](const py::object& poset, const std::string& lo, const std::string& hi) {
        return poset_arg(poset).saturated_chain_lengths(lo, hi);
      },
      py::arg("poset"), py::arg("lo"), py::arg("hi"));

  m.def(
      "delta",
      [](const py::object& poset, unsigned s, unsigned d, const std::string& node) {
        return ext_to_python(delta(s, d, poset_arg(poset), node));
      },
      py::arg("poset"), py::arg("s"), py::arg("d"), py::arg("node"));

  m.def(
      "big_d",
      [](const py::object& poset, unsigned s, unsigned d) {
        return ext_to_python(big_d(s, d, poset_arg(poset)));
      },
      py::arg("poset"), py::arg("s"), py::arg("d"));

  m.def(
      "dim_tensor_fields",
      [](const py::object& a, const py::object& b) {
        return ext_to_python(dim_tensor_fields(ext_from_python(a), ext_from_python(b)));
      },
      py::arg("td_k"), py::arg("td_l"));

  m.def(
      "dim_tensor_af_pair",
      [](const py::object& a_td, const py::object& a_dim, const py::object& b_td,
         const py::object& b_dim) {
        return ext_to_python(
            dim_tensor_af_pair(AFSummary(ext_from_python(a_td), ext_from_python(a_dim)),
                               AFSummary(ext_from_python(b_td), ext_from_python(b_dim))));
      },
      py::arg("a_td"), py::arg("a_dim"), py::arg("b_td"), py::arg("b_dim"));

  m.def(
      "dim_tensor_af_general",
      [](const py::object& a_td, const py::object& a_dim, const py::object& poset) {
        return ext_to_python(dim_tensor_af_general(
            AFSummary(ext_from_python(a_td), ext_from_python(a_dim)), poset_arg(poset)));
      },
      py::arg("a_td"), py::arg("a_dim"), py::arg("poset"));

  m.def("list_fixtures", [] { return list_fixtures(); });

  m.def(
      "run_fixture",
      [](const std::string& name) { return to_python(to_json(run_fixture(load_fixture(name)))); },
      py::arg("name"));

  m.def("rules", [] { return to_python(rule_catalog_json()); });
}

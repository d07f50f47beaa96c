#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pzeta/characters.hpp"
#include "pzeta/pipeline.hpp"

namespace py = pybind11;
using namespace pzeta;

namespace {

std::string json_str(const Json& doc) { return doc.dump(2); }

std::vector<std::string> counts_as_strings(const std::vector<Int>& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

}  // namespace

PYBIND11_MODULE(_pzeta, m) {
  m.doc() = "exact p-local zeta functions of finitely generated nilpotent groups";

  py::register_exception<BudgetExceededError>(m, "BudgetExceeded");
  py::register_exception<NoStabilizationError>(m, "NoStabilization");
  py::register_exception<InsufficientPrecisionError>(m, "InsufficientPrecision");
  py::register_exception<InputError>(m, "InputError");

  py::class_<MalcevPresentation, std::shared_ptr<MalcevPresentation>>(
      m, "Presentation")
      .def_static(
          "load",
          [](const std::string& path) {
            return std::make_shared<MalcevPresentation>(
                MalcevPresentation::load_file(path));
          },
          py::arg("path"))
      .def_static(
          "from_json",
          [](const std::string& text) {
            return std::make_shared<MalcevPresentation>(
                MalcevPresentation::from_json_text(text));
          },
          py::arg("text"))
      .def_property_readonly("name", &MalcevPresentation::name)
      .def_property_readonly("rank", &MalcevPresentation::rank)
      .def_property_readonly("nilpotency_class",
                             &MalcevPresentation::nilpotency_class)
      .def("fingerprint", &MalcevPresentation::fingerprint);

  struct QuotientHandle {
    std::shared_ptr<const FiniteQuotient> q;
  };
  py::class_<QuotientHandle>(m, "FiniteQuotient")
      .def_property_readonly(
          "order", [](const QuotientHandle& h) { return h.q->order().get_str(); })
      .def_property_readonly(
          "precision", [](const QuotientHandle& h) { return h.q->precision(); })
      .def_property_readonly(
          "prime", [](const QuotientHandle& h) { return h.q->prime().get_si(); })
      .def("multiply", [](const QuotientHandle& h, Coords a, Coords b) {
        return h.q->multiply(a, b);
      })
      .def("inverse", [](const QuotientHandle& h, Coords a) {
        return h.q->inverse(a);
      })
      .def("power", [](const QuotientHandle& h, Coords a, long e) {
        return h.q->power(a, Int(e));
      });

  m.def(
      "build_quotient",
      [](std::shared_ptr<MalcevPresentation> pres, long p, int k) {
        return QuotientHandle{build_quotient(pres, Int(p), k)};
      },
      py::arg("presentation"), py::arg("p"), py::arg("k"));

  m.def(
      "subgroup_counts",
      [](std::shared_ptr<MalcevPresentation> pres, long p, int max_n,
         const std::string& variant, int workers) {
        EnumOptions opts;
        opts.workers = workers;
        std::vector<std::string> out;
        for (int n = 0; n <= max_n; ++n)
          out.push_back(stabilized_count(pres, Int(p), n,
                                         parse_variant(variant), opts)
                            .value.get_str());
        return out;
      },
      py::arg("presentation"), py::arg("p"), py::arg("max_n"),
      py::arg("variant") = "all", py::arg("workers") = 1);

  m.def(
      "twist_counts",
      [](std::shared_ptr<MalcevPresentation> pres, long p, int max_n,
         int workers) {
        EnumOptions opts;
        opts.workers = workers;
        std::vector<std::string> out;
        for (int n = 0; n <= max_n; ++n)
          out.push_back(stabilized_count(pres, Int(p), n,
                                         CountVariant::TwistIsoclasses, opts)
                            .value.get_str());
        return out;
      },
      py::arg("presentation"), py::arg("p"), py::arg("max_n"),
      py::arg("workers") = 1);

  m.def(
      "enumerate_subgroup_count",
      [](std::shared_ptr<MalcevPresentation> pres, long p, int k, int n) {
        auto q = build_quotient(pres, Int(p), k);
        return enumerate_subgroups(q, n).size();
      },
      py::arg("presentation"), py::arg("p"), py::arg("k"), py::arg("n"));

  m.def(
      "fit",
      [](const std::vector<long>& coeffs, int max_deg) {
        CoeffSeries s;
        s.prime = 0;
        for (long c : coeffs) s.coefficients.push_back(Int(c));
        return json_str(fit_report_json(fit_rational(s, max_deg)));
      },
      py::arg("coeffs"), py::arg("max_deg"));

  m.def(
      "expand",
      [](const std::vector<long>& num, const std::vector<long>& den, int m) {
        RationalFunction r;
        for (long c : num) r.numerator.push_back(Rational(c));
        for (long c : den) r.denominator.push_back(Rational(c));
        std::vector<std::string> out;
        for (const auto& c : expand(r, m)) out.push_back(to_string(c));
        return out;
      },
      py::arg("numerator"), py::arg("denominator"), py::arg("m"));

  m.def(
      "measure",
      [](long p, const std::string& matrix_json) {
        return json_str(run_measure(Int(p), matrix_json));
      },
      py::arg("p"), py::arg("matrix_json"));

  m.def(
      "lattice_canon",
      [](long p, const std::string& matrix_json) {
        return json_str(run_lattice_canon(Int(p), matrix_json));
      },
      py::arg("p"), py::arg("matrix_json"));

  m.def(
      "oracle_check",
      [](long p, const std::string& matrix_json, int k) {
        return json_str(run_oracle_check(Int(p), matrix_json, k, Int(1) << 28));
      },
      py::arg("p"), py::arg("matrix_json"), py::arg("k") = 3);

  m.def("counts_as_strings", &counts_as_strings);
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "apxgrp/cayley.hpp"
#include "apxgrp/errors.hpp"
#include "apxgrp/families.hpp"
#include "apxgrp/ffmat.hpp"
#include "apxgrp/setops.hpp"
#include "apxgrp/structure.hpp"

namespace py = pybind11;
using namespace apxgrp;

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace {

ExecOptions exec(std::size_t budget, unsigned threads) { return ExecOptions{budget, threads}; }

py::tuple ratio_tuple(Ratio r) { return py::make_tuple(r.num, r.den); }

}  // namespace

PYBIND11_MODULE(_apxgrp, m) {
  m.doc() = "Approximate subgroups of SL_n(F_p): product sets, tori and Cayley graphs";

  auto usage = py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", usage.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  py::class_<Ambient>(m, "Ambient")
      .def(py::init<int, std::uint32_t>(), py::arg("n"), py::arg("p"))
      .def_property_readonly("n", &Ambient::n)
      .def_property_readonly("p", &Ambient::p)
      .def("group_order", &Ambient::group_order)
      .def("__repr__", [](const Ambient& a) {
        return "Ambient(n=" + std::to_string(a.n()) + ", p=" + std::to_string(a.p()) + ")";
      });

  py::class_<MatSL>(m, "MatSL")
      .def_static("from_rows", &MatSL::from_rows, py::arg("ambient"), py::arg("rows"))
      .def_static("identity", &MatSL::identity)
      .def_property_readonly("key", &MatSL::key)
      .def("rows", &MatSL::rows)
      .def("trace", &MatSL::trace)
      .def("__mul__", &mat_mul)
      .def("inverse", &mat_inv)
      .def("__eq__", &MatSL::operator==)
      .def("__hash__", &MatSL::key)
      .def("__repr__", &MatSL::to_string);

  py::class_<CharPoly>(m, "CharPoly")
      .def_property_readonly("coefficients", &CharPoly::coefficients)
      .def("__eq__", &CharPoly::operator==)
      .def("__repr__", &CharPoly::to_string);

  m.def("char_poly", &char_poly);
  m.def("is_regular_semisimple", &is_regular_semisimple);

  py::class_<MatSet>(m, "MatSet")
      .def(py::init([](const std::vector<MatSL>& elems) {
             if (elems.empty()) throw UsageError("MatSet needs at least one element; use MatSet.empty");
             return MatSet::from_elements(elems.front().ambient(), elems);
           }),
           py::arg("elements"))
      .def_static("empty", [](const Ambient& a) { return MatSet(a); })
      .def("__len__", &MatSet::size)
      .def("__contains__", &MatSet::contains)
      .def("elements", &MatSet::elements)
      .def("keys", [](const MatSet& s) { return std::vector<MatKey>(s.keys().begin(), s.keys().end()); })
      .def("is_symmetric", &MatSet::is_symmetric)
      .def("contains_identity", &MatSet::contains_identity)
      .def("__eq__", &MatSet::operator==);

  const std::size_t budget = kDefaultElementBudget;
  m.def("product", [](const MatSet& a, const MatSet& b, std::size_t bud, unsigned t) { return product(a, b, exec(bud, t)); },
        py::arg("a"), py::arg("b"), py::arg("budget") = budget, py::arg("threads") = 0);
  m.def("power_set", [](const MatSet& a, int k, std::size_t bud, unsigned t) { return power_set(a, k, exec(bud, t)); },
        py::arg("a"), py::arg("k"), py::arg("budget") = budget, py::arg("threads") = 0);
  m.def("symmetrize", &symmetrize);

  py::class_<GrowthReport>(m, "GrowthReport")
      .def_readonly("size1", &GrowthReport::size1)
      .def_readonly("size2", &GrowthReport::size2)
      .def_readonly("size3", &GrowthReport::size3)
      .def_property_readonly("doubling", [](const GrowthReport& g) { return ratio_tuple(g.doubling); })
      .def_property_readonly("tripling", [](const GrowthReport& g) { return ratio_tuple(g.tripling); })
      .def_readonly("greedy_k", &GrowthReport::greedy_k);
  m.def("growth_report",
        [](const MatSet& a, bool cert, std::size_t bud, unsigned t) { return growth_report(a, cert, exec(bud, t)); },
        py::arg("a"), py::arg("with_certificate") = false, py::arg("budget") = budget, py::arg("threads") = 0);

  m.def("certify_approximate", [](const MatSet& a) {
    const ControlWitness w = certify_approximate(a);
    return py::make_tuple(w.x, ratio_tuple(w.k));
  });
  m.def("verify_control", [](const MatSet& a, const MatSet& b, const MatSet& x, std::uint64_t num, std::uint64_t den) {
    return verify_control(a, b, x, Ratio(num, den));
  }, py::arg("a"), py::arg("b"), py::arg("x"), py::arg("k_num"), py::arg("k_den") = 1);

  py::class_<TorusHandle>(m, "TorusHandle")
      .def(py::init<const MatSL&>())
      .def_property_readonly("anchor", &TorusHandle::anchor)
      .def("contains", &TorusHandle::contains);
  py::class_<ConjClassHandle>(m, "ConjClassHandle")
      .def(py::init<const MatSL&>())
      .def("contains", &ConjClassHandle::contains);

  py::class_<LPReport>(m, "LPReport")
      .def_property_readonly("variety_kind", [](const LPReport& r) { return to_string(r.variety_kind); })
      .def_readonly("m", &LPReport::m)
      .def_readonly("count", &LPReport::count)
      .def_readonly("set_size", &LPReport::set_size)
      .def_readonly("measured_exponent", &LPReport::measured_exponent)
      .def_readonly("predicted_exponent", &LPReport::predicted_exponent);

  m.def("centralizer_in", &centralizer_in);
  m.def("same_torus", &same_torus);
  m.def("torus_intersection", [](const MatSet& a, int mm, const TorusHandle& t) { return torus_intersection(a, mm, t); });
  m.def("deficient_count", [](const MatSet& a, int mm, const TorusHandle& t) { return deficient_count(a, mm, t); });
  m.def("conj_class_intersection",
        [](const MatSet& a, int mm, const ConjClassHandle& c) { return conj_class_intersection(a, mm, c); });
  m.def("lp_exponent", [](const MatSet& a, int mm, const TorusHandle& t) { return lp_exponent(a, mm, t); });
  m.def("lp_exponent", [](const MatSet& a, int mm, const ConjClassHandle& c) { return lp_exponent(a, mm, c); });
  m.def("enumerate_involved_tori", [](const MatSet& a) { return enumerate_involved_tori(a); });
  m.def("check_conjugation_invariance", [](const MatSet& a, const MatSet& conj) {
    std::vector<py::tuple> out;
    for (const auto& v : check_conjugation_invariance(a, conj)) out.push_back(py::make_tuple(v.torus_anchor, v.conjugator));
    return out;
  });
  m.def("count_involved_vs_bound", [](const MatSet& a) {
    const InvolvedCount c = count_involved_vs_bound(a);
    return py::make_tuple(c.m, c.measured_exponent, c.bound_exponent);
  });
  m.def("regular_proportion", [](const MatSet& a, int k) { return ratio_tuple(regular_proportion(a, k)); });
  m.def("weyl_order", [](const MatSet& g, const TorusHandle& t) { return weyl_order(g, t); });

  py::class_<GenSet>(m, "GenSet")
      .def(py::init<const MatSet&>())
      .def_property_readonly("generators", &GenSet::generators)
      .def("__len__", &GenSet::size);

  py::class_<BfsStats>(m, "BfsStats")
      .def_readonly("group_order", &BfsStats::group_order)
      .def_readonly("diameter", &BfsStats::diameter)
      .def_readonly("sphere_sizes", &BfsStats::sphere_sizes);

  py::class_<SpectralReport>(m, "SpectralReport")
      .def_readonly("component_order", &SpectralReport::component_order)
      .def_readonly("generated", &SpectralReport::generated)
      .def_readonly("lambda2", &SpectralReport::lambda2)
      .def_readonly("gap", &SpectralReport::gap)
      .def_readonly("iterations", &SpectralReport::iterations)
      .def_readonly("residual", &SpectralReport::residual)
      .def_readonly("converged", &SpectralReport::converged);

  m.def("generate_group", [](const GenSet& s) { return generate_group(s); });
  m.def("diameter", [](const GenSet& s) { return diameter(s); });
  m.def("girth", [](const GenSet& s) { return girth(s); });
  m.def("spectral_gap",
        [](const GenSet& s, std::uint64_t cap, double tol) { return spectral_gap(s, SpectralOptions{cap, tol}); },
        py::arg("s"), py::arg("iteration_cap") = 100'000, py::arg("residual_tolerance") = 1e-8);

  m.def("progression", &progression);
  m.def("ball", [](const GenSet& s, int r) { return ball(s, r); });
  m.def("borel_subset", [](const Ambient& a) { return borel_subset(a); });
  m.def("full_group", [](const Ambient& a) { return full_group(a); });
  m.def("standard_unipotents", &standard_unipotents);
  m.def("reduce_mod_p", &reduce_mod_p);
  m.def("random_generators", &random_generators, py::arg("ambient"), py::arg("count"), py::arg("seed"));

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}

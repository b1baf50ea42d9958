#include "wcep/classic.hpp"
#include "wcep/harness.hpp"
#include "wcep/matrix_io.hpp"
#include "wcep/weighted.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

namespace py = pybind11;
using namespace wcep;

namespace {

CoreEpRoute parse_route(const std::string& name) {
  if (name == "direct") return CoreEpRoute::direct;
  if (name == "gdrazin") return CoreEpRoute::gdrazin;
  if (name == "13w") return CoreEpRoute::one_three_w;
  throw PreconditionError("unknown route '" + name + "' (direct, gdrazin, 13w)");
}

harness::WeightMode parse_mode(const std::string& name) {
  const auto mode = harness::parse_weight_mode(name);
  if (!mode) throw PreconditionError("unknown weight mode '" + name + "'");
  return *mode;
}

Triangle parse_triangle(const std::string& name) {
  if (name == "upper") return Triangle::upper;
  if (name == "lower") return Triangle::lower;
  throw PreconditionError("shape must be 'upper' or 'lower'");
}

// Every entry point takes the tolerance last and defaults it.
#define WCEP_TOL py::arg("tol") = Tolerance{}

}  // namespace

PYBIND11_MODULE(wcep, m) {
  m.doc() = "Generalized and weighted core-EP inverses of complex square matrices.";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ShapeError>(m, "ShapeError", error.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<InternalError>(m, "InternalError", error.ptr());

  py::class_<Tolerance>(m, "Tolerance")
      .def(py::init([](double rank_rtol, double eq_atol, double eq_rtol) {
             Tolerance t{rank_rtol, eq_atol, eq_rtol};
             t.validate();
             return t;
           }),
           py::arg("rank_rtol") = 1e-10, py::arg("eq_atol") = 1e-10, py::arg("eq_rtol") = 1e-8)
      .def_readwrite("rank_rtol", &Tolerance::rank_rtol)
      .def_readwrite("eq_atol", &Tolerance::eq_atol)
      .def_readwrite("eq_rtol", &Tolerance::eq_rtol)
      .def("__repr__", [](const Tolerance& t) {
        return "Tolerance(rank_rtol=" + std::to_string(t.rank_rtol) +
               ", eq_atol=" + std::to_string(t.eq_atol) + ", eq_rtol=" + std::to_string(t.eq_rtol) + ")";
      });

  py::class_<InverseCertificate>(m, "Certificate")
      .def_readonly("value", &InverseCertificate::value)
      .def_readonly("exists", &InverseCertificate::exists)
      .def_readonly("residuals", &InverseCertificate::residuals)
      .def_readonly("witnesses", &InverseCertificate::witnesses)
      .def_property_readonly("kind", [](const InverseCertificate& c) { return std::string(to_string(c.kind)); })
      .def_property_readonly("worst_residual", &InverseCertificate::worst_residual)
      .def("__bool__", [](const InverseCertificate& c) { return c.exists; })
      .def("__repr__", [](const InverseCertificate& c) {
        return "<Certificate " + std::string(to_string(c.kind)) + (c.exists ? " exists" : " does not exist") +
               ", worst residual " + std::to_string(c.worst_residual()) + ">";
      });

  m.def("index", [](const CMatrix& a, const Tolerance& tol) { return wcep::index(a, tol); },
        py::arg("a"), WCEP_TOL, "Drazin index of a.");
  m.def("moore_penrose", &moore_penrose, py::arg("a"), WCEP_TOL);
  m.def("drazin", &drazin, py::arg("a"), WCEP_TOL);
  m.def("group", &group, py::arg("a"), WCEP_TOL);
  m.def("core", &core, py::arg("a"), WCEP_TOL);
  m.def("core_ep", &core_ep, py::arg("a"), WCEP_TOL);
  m.def("one_three", &one_three, py::arg("a"), WCEP_TOL);
  m.def("spectral_projection", &spectral_projection, py::arg("a"), WCEP_TOL);

  m.def("w_gdrazin", [](CMatrix a, CMatrix w, const Tolerance& tol) {
    return w_gdrazin(WeightedPair(std::move(a), std::move(w)), tol);
  }, py::arg("a"), py::arg("w"), WCEP_TOL);
  m.def("w_core", [](CMatrix a, CMatrix w, const Tolerance& tol) {
    return w_core(WeightedPair(std::move(a), std::move(w)), tol);
  }, py::arg("a"), py::arg("w"), WCEP_TOL);
  m.def("w_one_three", [](CMatrix a, CMatrix w, const Tolerance& tol) {
    return w_one_three(WeightedPair(std::move(a), std::move(w)), tol);
  }, py::arg("a"), py::arg("w"), WCEP_TOL);
  m.def("w_core_ep", [](CMatrix a, CMatrix w, const std::string& route, const Tolerance& tol) {
    return w_core_ep(WeightedPair(std::move(a), std::move(w)), parse_route(route), tol);
  }, py::arg("a"), py::arg("w"), py::arg("route") = "direct", WCEP_TOL,
     "Weighted core-EP inverse; route is 'direct', 'gdrazin' or '13w'.");
  m.def("certify_w_core_ep", [](CMatrix a, CMatrix w, CMatrix x, const Tolerance& tol) {
    return certify_w_core_ep(WeightedPair(std::move(a), std::move(w)), std::move(x), tol);
  }, py::arg("a"), py::arg("w"), py::arg("x"), WCEP_TOL);
  m.def("bc_inverse", &bc_inverse, py::arg("a"), py::arg("b"), py::arg("c"), WCEP_TOL);

  m.def("core_ep_decompose", [](CMatrix a, CMatrix w, const Tolerance& tol) {
    const CoreEpDecomposition d = core_ep_decompose(WeightedPair(std::move(a), std::move(w)), tol);
    py::dict out;
    out["z"] = d.z;
    out["y"] = d.y;
    out["x"] = d.x;
    out["residuals"] = d.residuals;
    out["valid"] = d.valid;
    return out;
  }, py::arg("a"), py::arg("w"), WCEP_TOL, "Returns {z, y, x, residuals, valid} with a = z + y.");
  m.def("polar_projection", [](CMatrix a, CMatrix w, unsigned m_max, const Tolerance& tol) {
    const PolarCertificate p = polar_projection(WeightedPair(std::move(a), std::move(w)), m_max, tol);
    py::dict out;
    out["p"] = p.p;
    out["invertibility_margins"] = p.invertibility_margins;
    out["nilpotent"] = p.nilpotent;
    out["valid"] = p.valid;
    return out;
  }, py::arg("a"), py::arg("w"), py::arg("m_max"), WCEP_TOL);
  m.def("annihilator_equivalence", [](CMatrix a, CMatrix w, const CMatrix& b, const Tolerance& tol) {
    return annihilator_equivalence(WeightedPair(std::move(a), std::move(w)), b, tol);
  }, py::arg("a"), py::arg("w"), py::arg("b"), WCEP_TOL);
  m.def("block_triangular_core_ep", [](const CMatrix& a, const CMatrix& b, const CMatrix& d,
                                       const CMatrix& w, const std::string& shape, const Tolerance& tol) {
    return block_triangular_core_ep(a, b, d, w, tol, parse_triangle(shape));
  }, py::arg("a"), py::arg("b"), py::arg("d"), py::arg("w"), py::arg("shape") = "upper", WCEP_TOL);

  m.def("generate_pair", [](Eigen::Index n, std::size_t target_index, const std::string& weight_mode,
                            std::uint64_t seed, double condition_cap) {
    const WeightedPair p = harness::generate_pair({n, target_index, parse_mode(weight_mode), seed, condition_cap});
    return py::make_tuple(p.a, p.w);
  }, py::arg("n"), py::arg("index") = 0, py::arg("weight_mode") = "identity", py::arg("seed") = 0,
     py::arg("condition_cap") = 100.0, "Seeded (A, W) with ind(WA) equal to index.");
  m.def("suite_labels", &harness::suite_labels);
  m.def("run_suite", [](const std::string& label, std::uint64_t trials, std::uint64_t seed, const Tolerance& tol) {
    const harness::VerificationReport r = [&] {
      py::gil_scoped_release release;
      return harness::run_suite(label, trials, seed, tol);
    }();
    py::dict out;
    out["suite"] = r.suite;
    out["trials"] = r.trials;
    out["failures"] = r.failures;
    out["worst_residual"] = r.worst_residual;
    out["seed"] = r.seed;
    out["notes"] = r.notes;
    return out;
  }, py::arg("suite"), py::arg("trials") = 100, py::arg("seed") = 0, WCEP_TOL);
}

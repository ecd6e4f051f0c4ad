#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sparsepot/envelopes.hpp"
#include "sparsepot/errors.hpp"
#include "sparsepot/imag_step.hpp"
#include "sparsepot/potential.hpp"
#include "sparsepot/schrodinger_1d.hpp"
#include "sparsepot/sparse_builder.hpp"
#include "sparsepot/spectral_count.hpp"
#include "sparsepot/step_model.hpp"

namespace py = pybind11;
using namespace sparsepot;

namespace {

Region make_region(py::object spec) {
  const auto v = spec.cast<std::vector<double>>();
  if (v.size() == 4) return Region::rect(v[0], v[1], v[2], v[3]);
  if (v.size() == 3) return Region::disk(cplx(v[0], v[1]), v[2]);
  throw DomainError("region: (re_lo, re_hi, im_lo, im_hi) or (re, im, radius)");
}

}  // namespace

PYBIND11_MODULE(_sparsepot, m) {
  m.doc() = "Complex step potentials, transfer-matrix secular functions and eigenvalue counting";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<PoleError>(m, "PoleError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<SheetError>(m, "SheetError", base.ptr());
  py::register_exception<ContourError>(m, "ContourError", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<TargetError>(m, "TargetError", base.ptr());

  py::enum_<Parity>(m, "Parity").value("even", Parity::even).value("odd", Parity::odd);
  py::enum_<Sheet>(m, "Sheet").value("physical", Sheet::physical).value("unphysical", Sheet::unphysical);

  m.def("sqrt_upper", &sqrt_upper);
  m.def("lambert_w", &lambert_w, py::arg("n"), py::arg("z"));
  m.def("bessel_j", &bessel_j, py::arg("nu"), py::arg("z"));
  m.def("hankel1", &hankel1, py::arg("nu"), py::arg("z"));

  py::class_<StepBump>(m, "StepBump")
      .def(py::init([](cplx v0, double R, double x0) { return StepBump{v0, R, x0}; }), py::arg("v0"),
           py::arg("R") = 1.0, py::arg("x0") = 0.0)
      .def_readwrite("v0", &StepBump::v0)
      .def_readwrite("R", &StepBump::R)
      .def_readwrite("x0", &StepBump::x0)
      .def("__repr__", [](const StepBump& b) {
        return "StepBump(v0=" + py::repr(py::cast(b.v0)).cast<std::string>() + ", R=" + std::to_string(b.R) +
               ", x0=" + std::to_string(b.x0) + ")";
      });

  m.def("secular", &secular, py::arg("bump"), py::arg("E"), py::arg("parity"),
        py::arg("sheet") = Sheet::physical);
  m.def("secular_regular", &secular_regular, py::arg("bump"), py::arg("E"), py::arg("parity"),
        py::arg("sheet") = Sheet::physical);
  m.def("physical_sheet", &physical_sheet);
  m.def("solve_for_v0", &solve_for_v0, py::arg("kappa"), py::arg("R"), py::arg("parity"));
  m.def("energy", &energy, py::arg("kappa"), py::arg("v0"));

  py::class_<BumpReport>(m, "BumpReport")
      .def_readonly("bump", &BumpReport::bump)
      .def_readonly("parity", &BumpReport::parity)
      .def_readonly("zeta", &BumpReport::zeta)
      .def_readonly("kappa", &BumpReport::kappa)
      .def_readonly("residual", &BumpReport::residual)
      .def_readonly("newton_iterations", &BumpReport::newton_iterations)
      .def_readonly("davies_nath", &BumpReport::davies_nath);
  m.def(
      "construct_bump",
      [](cplx zeta, double sigma, double eps0) {
        BumpOptions o;
        o.sigma = sigma;
        o.eps0 = eps0;
        return construct_bump(zeta, o);
      },
      py::arg("zeta"), py::arg("sigma") = 1.0, py::arg("eps0") = 0.2);

  py::class_<PiecewisePotential>(m, "PiecewisePotential")
      .def(py::init([](const std::vector<std::tuple<double, double, cplx>>& pieces) {
             std::vector<Piece> p;
             for (const auto& [a, b, v] : pieces) p.push_back({a, b, v});
             return PiecewisePotential(std::move(p));
           }),
           py::arg("pieces"))
      .def_static("from_bump", &PiecewisePotential::from_bump)
      .def_static("from_json", &PiecewisePotential::from_json)
      .def("to_json", &PiecewisePotential::to_json)
      .def("scaled", &PiecewisePotential::scaled)
      .def("norm_lq", &PiecewisePotential::norm_lq)
      .def("__len__", &PiecewisePotential::size)
      .def("__call__", &PiecewisePotential::operator());

  m.def("global_secular", &global_secular, py::arg("pot"), py::arg("E"));

  m.def(
      "winding_count",
      [](const std::function<cplx(cplx)>& f, py::object region) {
        // Python callables hold the GIL, so the contour runs on this thread.
        return winding_count(f, make_region(region));
      },
      py::arg("f"), py::arg("region"));

  m.def(
      "eigenvalues",
      [](const PiecewisePotential& pot, py::object region, int workers) {
        LocateParams lp;
        lp.workers = workers;
        const Region reg = make_region(region);  // touches Python objects, so before the release
        ZeroReport rep;
        {
          py::gil_scoped_release release;
          rep = locate_zeros([&pot](cplx E) { return global_secular(pot, E); }, reg, lp);
        }
        std::vector<std::pair<cplx, int>> out;
        for (const Zero& z : rep.zeros) out.emplace_back(z.location, z.multiplicity);
        return out;
      },
      py::arg("pot"), py::arg("region"), py::arg("workers") = 1,
      "Eigenvalues (location, multiplicity) of -d^2/dx^2 + V inside a rectangle or disk.");

  m.def(
      "census",
      [](int N, double C_box, int workers) {
        py::gil_scoped_release release;
        const CensusRow r = census_imag_step(N, C_box, workers);
        return std::make_tuple(r.count, r.ratio);
      },
      py::arg("N"), py::arg("C_box") = 10.0, py::arg("workers") = 1);

  m.def(
      "sep",
      [](const std::vector<double>& L, double eta) { return sep(SeparationSequence::finite(L), eta); },
      py::arg("L"), py::arg("eta"));
  m.def(
      "kappa_tilde",
      [](int d, double q, double p, double alpha, double gamma) {
        EnvelopeParams P;
        P.d = d;
        P.q = q;
        P.p = p;
        P.alpha = alpha;
        P.gamma = gamma;
        return kappa_tilde(P);
      },
      py::arg("d") = 1, py::arg("q") = 2.0, py::arg("p") = 4.0, py::arg("alpha") = 1.0,
      py::arg("gamma") = 1.0);

  m.def(
      "build_sparse_report",
      [](const std::vector<cplx>& zetas, bool faithful, double delta, int workers) {
        TargetSequence t;
        t.zetas = zetas;
        ChooseOptions o;
        o.mode = faithful ? BuildMode::faithful : BuildMode::desk;
        o.delta = delta;
        py::gil_scoped_release release;
        return build_report_json(build_sparse(t, EnvelopeParams{}, o, true, workers));
      },
      py::arg("zetas"), py::arg("faithful") = false, py::arg("delta") = 1e-2, py::arg("workers") = 1,
      "JSON report of a desk- or faithful-mode sparse build.");
}

#include "mmtk/flow.hpp"
#include "mmtk/moment.hpp"
#include "mmtk/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mmtk;

namespace {

py::dict report_dict(const VerificationReport& r) {
  py::dict d;
  d["check"] = r.check;
  d["samples"] = r.samples;
  d["seed"] = r.seed;
  d["passed"] = r.passed();
  d["max_error"] = r.max_error;
  d["threshold"] = r.threshold;
  d["violations"] = r.violations;
  d["extras"] = r.extras;
  return d;
}

ProjectivePoint point(const Vector& v) { return ProjectivePoint(v); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Momentum maps, polytopes, strata and cell charts on complex projective space.";

  static py::exception<Error> error(m, "MmtkError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args = (code, message)
      py::tuple args = py::make_tuple(std::string(error_name(e.code())), e.what());
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  py::class_<RepresentationSpec>(m, "Representation")
      .def_property_readonly("dim_v", &RepresentationSpec::dim_v)
      .def_property_readonly("dim_g", [](const RepresentationSpec& s) { return s.algebra().dim(); })
      .def_property_readonly("p_dim", &RepresentationSpec::p_dim)
      .def_property_readonly("k_dim", &RepresentationSpec::k_dim)
      .def_property_readonly("a_rank", &RepresentationSpec::a_rank)
      .def_property_readonly("metadata", &RepresentationSpec::metadata)
      .def("rho_p", &RepresentationSpec::rho_p, py::arg("beta"))
      .def("beta_from_torus", &RepresentationSpec::beta_from_torus, py::arg("torus_point"))
      .def("p_element", &RepresentationSpec::p_element, py::arg("index"));

  m.def("load_representation", [](const std::string& path) { return load_representation_file(path); },
        py::arg("path"));
  m.def("parse_representation", [](const std::string& doc) { return load_representation(doc); },
        py::arg("document"));

  m.def("moment_value", [](const RepresentationSpec& s, const Vector& x) { return moment_value(s, point(x)); });
  m.def("moment_torus", [](const RepresentationSpec& s, const Vector& x) { return moment_torus(s, point(x)); });
  m.def("moment_component", [](const RepresentationSpec& s, const Vector& x, const RealVector& beta) {
    return moment_component(s, point(x), beta);
  });
  m.def("vector_field", [](const RepresentationSpec& s, const Vector& x, const RealVector& beta) {
    return vector_field(s, point(x), beta).t;
  });
  m.def("fs_gradient", [](const RepresentationSpec& s, const Vector& x, const RealVector& beta) {
    return fs_gradient(s, point(x), beta).t;
  });

  m.def("extreme_points", [](const std::vector<RealVector>& pts) { return extreme_points(pts).indices; },
        py::arg("points"));
  m.def("momentum_polytope", [](const RepresentationSpec& s) {
    const Polytope poly = momentum_polytope(s);
    py::dict d;
    d["points"] = poly.points;
    d["vertices"] = poly.vertices;
    py::list facets;
    for (const Facet& f : poly.facets) facets.append(py::make_tuple(f.normal, f.offset, f.vertices));
    d["facets"] = facets;
    d["affine_dim"] = poly.affine_dim;
    d["exact"] = poly.exact;
    return d;
  });

  py::class_<BetaGrading>(m, "Grading")
      .def_readonly("beta", &BetaGrading::beta)
      .def_readonly("rho_beta", &BetaGrading::rho_beta)
      .def_property_readonly("dims", [](const BetaGrading& g) {
        return py::make_tuple(g.r_minus.cols(), g.g_zero.cols(), g.r_plus.cols());
      });
  m.def("build_grading", &build_grading, py::arg("rep"), py::arg("beta"));
  m.def("classify_point", [](const RepresentationSpec& s, const BetaGrading& g, const Vector& x) {
    const StratumRecord r = classify_point(s, g, point(x));
    py::dict d;
    d["fixed"] = r.fixed;
    d["level_value"] = r.level_value;
    d["in_beta_minus_max"] = r.in_beta_minus_max;
    d["forward_limit"] = r.forward_limit.vector();
    d["backward_limit"] = r.backward_limit.vector();
    return d;
  });

  py::class_<LstChart>(m, "Chart")
      .def_property_readonly("n_dim", &LstChart::n_dim)
      .def_property_readonly("f_dim", &LstChart::f_dim)
      .def_property_readonly("u_dim", &LstChart::u_dim)
      .def_property_readonly("base_point", [](const LstChart& c) { return c.base_point.vector(); })
      .def("forward",
           [](const LstChart& c, const RealVector& n, const RealVector& f, const RealVector& u) {
             return phi_forward(c, ChartCoordinates{n, f, u}).vector();
           },
           py::arg("n"), py::arg("f"), py::arg("u"))
      .def("inverse", [](const LstChart& c, const Vector& z) {
        const ChartCoordinates x = phi_inverse(c, point(z));
        return py::make_tuple(x.n, x.f, x.u);
      });
  m.def("build_chart", [](const RepresentationSpec& s, const BetaGrading& g, const Vector& x) {
    return build_chart(s, g, point(x));
  });
  m.def("auto_chart", [](const RepresentationSpec& s) {
    Context ctx = make_context(s);
    if (!ctx.chart) build_chart(s, ctx.grading, ctx.base_point, ctx.w);
    return py::make_tuple(ctx.beta, *ctx.chart);
  }, "Chart at the top weight for the exposing vector of the lexicographically largest vertex; returns (beta, chart).");

  m.def("flow", [](const RepresentationSpec& s, const Vector& x0) {
    const Trajectory t = flow_eta(s, point(x0));
    std::vector<double> times, etas;
    for (const auto& smp : t.samples) {
      times.push_back(smp.time);
      etas.push_back(smp.eta);
    }
    const CertificateReport c = evaluate_certificate(s, t, momentum_polytope(s));
    py::dict d;
    d["time"] = times;
    d["eta"] = etas;
    d["limit"] = t.limit.vector();
    d["beta_limit"] = t.beta_limit;
    d["converged"] = t.converged;
    d["certified"] = c.passed;
    d["failed_clause"] = c.failed_clause;
    return d;
  }, py::arg("rep"), py::arg("x0"));

  m.def("run_battery", [](const RepresentationSpec& s, int samples, std::uint64_t seed) {
    py::list out;
    std::vector<VerificationReport> reports;
    {
      py::gil_scoped_release release;
      reports = run_battery(s, BatteryOptions{samples, seed});
    }
    for (const auto& r : reports) out.append(report_dict(r));
    return out;
  }, py::arg("rep"), py::arg("samples") = 1000, py::arg("seed") = 7);
}

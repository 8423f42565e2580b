#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stathyp/coarse.hpp"
#include "stathyp/errors.hpp"
#include "stathyp/experiment.hpp"
#include "stathyp/finsler.hpp"
#include "stathyp/statistics.hpp"

namespace py = pybind11;
using namespace stathyp;

namespace {

SpacePoint to_point(const ModelSpace& space, const py::handle& obj) {
  SpacePoint p;
  switch (space.kind()) {
    case SpaceKind::euclidean: p = obj.cast<RealVector>(); break;
    case SpaceKind::hyperbolic_plane:
    case SpaceKind::modular_torus: p = obj.cast<std::complex<double>>(); break;
    case SpaceKind::regular_tree: p = obj.cast<std::string>(); break;
    case SpaceKind::sup_product: {
      const auto items = obj.cast<py::sequence>();
      const auto& fs = space.factors();
      if (items.size() != fs.size()) throw DomainError("sup-product point needs one entry per factor");
      std::vector<SpacePoint> parts;
      for (std::size_t i = 0; i < fs.size(); ++i) parts.push_back(to_point(fs[i], items[i]));
      p = std::move(parts);
      break;
    }
  }
  space.validate(p);
  return p;
}

py::object from_point(const SpacePoint& p) {
  return std::visit(
      [](const auto& c) -> py::object {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, std::vector<SpacePoint>>) {
          py::list out;
          for (const auto& part : c) out.append(from_point(part));
          return out;
        } else {
          return py::cast(c);
        }
      },
      p.coords);
}

py::dict estimate_dict(const EstimateResult& r) {
  py::dict d;
  d["mean"] = r.mean;
  d["std_error"] = r.std_error;
  d["n_pairs"] = r.n_pairs;
  d["radius"] = r.radius;
  d["shell_width"] = r.shell_width;
  d["seed"] = r.seed;
  d["config_digest"] = r.config_digest;
  return d;
}

VolumeMethod method_of(const std::string& method, std::uint64_t seed, double target) {
  if (method == "exact") return VolumeMethod::exact();
  if (method == "monte-carlo") return VolumeMethod::monte_carlo(seed, target);
  throw ParameterError("method must be 'exact' or 'monte-carlo'");
}

}  // namespace

PYBIND11_MODULE(_stathyp, m) {
  m.doc() = "Monte Carlo statistics on model metric spaces";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  py::register_exception<CoverageError>(m, "CoverageError", base.ptr());

  py::class_<ModelSpace>(m, "ModelSpace")
      .def_static("euclidean", &ModelSpace::euclidean, py::arg("dimension"), py::arg("p") = 2.0,
                  py::arg("growth") = py::none())
      .def_static("hyperbolic_plane", &ModelSpace::hyperbolic_plane, py::arg("growth") = py::none())
      .def_static("modular_torus", &ModelSpace::modular_torus, py::arg("growth") = py::none())
      .def_static("regular_tree", &ModelSpace::regular_tree, py::arg("valence"), py::arg("growth") = py::none())
      .def_static("sup_product", &ModelSpace::sup_product, py::arg("factors"), py::arg("growth") = py::none())
      .def_property_readonly("kind", [](const ModelSpace& s) { return to_string(s.kind()); })
      .def_property_readonly("dimension", &ModelSpace::dimension)
      .def("describe", &ModelSpace::describe)
      .def("basepoint", [](const ModelSpace& s) { return from_point(s.basepoint()); })
      .def("distance",
           [](const ModelSpace& s, py::handle u, py::handle v) { return s.distance(to_point(s, u), to_point(s, v)); })
      .def("geodesic_point",
           [](const ModelSpace& s, py::handle u, py::handle v, double t) {
             return from_point(s.geodesic_point(to_point(s, u), to_point(s, v), t));
           })
      .def("is_thick", [](const ModelSpace& s, py::handle p, double eps) { return s.is_thick(to_point(s, p), eps); })
      .def("__repr__", &ModelSpace::describe);

  m.def(
      "estimate_e",
      [](const ModelSpace& s, double r, double k, std::size_t n, std::uint64_t seed, int workers) {
        EstimateResult res;
        {
          py::gil_scoped_release release;
          res = estimate_E(s, s.basepoint(), r, k, n, seed, workers);
        }
        return estimate_dict(res);
      },
      py::arg("space"), py::arg("r"), py::arg("k") = 0.0, py::arg("n") = 100000, py::arg("seed") = 0,
      py::arg("workers") = 1, "Mean of d(y, z) / r over sphere (k = 0), shell or ball (k = r) pairs at the basepoint.");
  m.def(
      "separation_fraction",
      [](const ModelSpace& s, double r, double t, double m0, std::size_t n, std::uint64_t seed, int workers) {
        SeparationResult res;
        {
          py::gil_scoped_release release;
          res = separation_fraction(s, s.basepoint(), r, t, m0, n, seed, workers);
        }
        py::dict d = estimate_dict(res.fraction);
        d["raw_fraction"] = res.raw.mean;
        d["orbit_integrated"] = res.orbit_integrated;
        return d;
      },
      py::arg("space"), py::arg("r"), py::arg("t"), py::arg("m0"), py::arg("n") = 1000, py::arg("seed") = 0,
      py::arg("workers") = 1);
  m.def(
      "ray_thick_stat",
      [](const ModelSpace& s, double angle, double length, double eps, double dt) {
        return ray_thick_stat(s, s.basepoint(), angle, length, eps, dt);
      },
      py::arg("space"), py::arg("angle"), py::arg("length"), py::arg("eps"), py::arg("dt") = 0.1);
  m.def(
      "thick_stat",
      [](const ModelSpace& s, py::handle x, py::handle y, double eps, double dt) {
        return thick_stat(s, to_point(s, x), to_point(s, y), eps, dt);
      },
      py::arg("space"), py::arg("x"), py::arg("y"), py::arg("eps"), py::arg("dt") = 0.1);
  m.def("thick_area_fraction", &thick_area_fraction, py::arg("eps"));
  m.def("reference_sphere_e", &reference_sphere_E, py::arg("space"), py::arg("r"));
  m.def(
      "thin_triangle_probe",
      [](const ModelSpace& s, py::handle x, py::handle y, py::handle z, double c, std::optional<double> ds) {
        const auto px = to_point(s, x), py_ = to_point(s, y), pz = to_point(s, z);
        const double d = s.distance(px, py_);
        const auto res = thin_triangle_probe(s, px, py_, pz, d / 3.0, 2.0 * d / 3.0, c, ds.value_or(default_probe_step(c)));
        return py::make_tuple(res.hit, res.min_distance);
      },
      py::arg("space"), py::arg("x"), py::arg("y"), py::arg("z"), py::arg("c"), py::arg("ds") = py::none(),
      "Probe the middle third of [x, y] against the C-neighbourhood of the other sides; returns (hit, min_distance).");

  py::class_<ConvexBody>(m, "ConvexBody")
      .def_static("polytope", &ConvexBody::polytope, py::arg("vertices"))
      .def_static("ellipsoid", &ConvexBody::ellipsoid, py::arg("semi_axes"))
      .def_static("lp_ball", &ConvexBody::lp_ball, py::arg("dimension"), py::arg("p"))
      .def_property_readonly("dimension", &ConvexBody::dimension);
  m.def(
      "mahler",
      [](const ConvexBody& b, const std::string& method, std::uint64_t seed, double target) {
        const auto r = mahler(b, method_of(method, seed, target));
        py::dict d;
        d["value"] = r.value;
        d["std_error"] = r.std_error;
        d["lower"] = r.lower;
        d["upper"] = r.upper;
        d["ok"] = r.ok();
        return d;
      },
      py::arg("body"), py::arg("method") = "exact", py::arg("seed") = 0, py::arg("target_rel_error") = 1e-3);
  m.def(
      "densities",
      [](const ConvexBody& b, const std::string& method, std::uint64_t seed, double target) {
        const auto r = densities(b, method_of(method, seed, target));
        py::dict d;
        d["busemann"] = r.busemann;
        d["holmes_thompson"] = r.holmes_thompson;
        d["ratio"] = r.ratio;
        d["ratio_error"] = r.ratio_error;
        return d;
      },
      py::arg("body"), py::arg("method") = "exact", py::arg("seed") = 0, py::arg("target_rel_error") = 1e-3);

  m.def(
      "annular_distance",
      [](double log_inv_x, double log_inv_y, double log_twist) {
        return annular_distance(HoroballPair::from_logs(log_inv_x, log_inv_y, log_twist));
      },
      py::arg("log_inv_length_x"), py::arg("log_inv_length_y"), py::arg("log_twist"));
  m.def("horocycle_distance", &horocycle_distance, py::arg("twist"));
  m.def("threshold_floor", &threshold_floor, py::arg("eps0"));

  m.def("catalog_json", &catalog_json);
  m.def(
      "default_config",
      [](const std::string& kind) {
        std::ostringstream os;
        write_config(os, default_config(kind));
        return os.str();
      },
      py::arg("kind"), "Default INI config for an experiment kind.");
  m.def(
      "run_experiment",
      [](const std::string& ini, std::optional<std::uint64_t> seed) {
        std::istringstream is(ini);
        auto cfg = parse_config(is);
        cfg.seed = effective_seed(cfg, seed);
        Report report;
        {
          py::gil_scoped_release release;
          report = run_experiment(cfg);
        }
        py::dict d;
        d["csv"] = to_csv(report);
        d["summary"] = to_summary(report);
        d["passed"] = report.passed();
        d["digest"] = report.digest;
        return d;
      },
      py::arg("config"), py::arg("seed") = py::none(),
      "Run an experiment from INI text; returns csv, summary, passed and digest.");
  m.def("digest", &digest, py::arg("text"));
  m.attr("CSV_HEADER") = std::string(kCsvHeader);
}

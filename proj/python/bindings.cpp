#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "liftscale/distributions.hpp"
#include "liftscale/error.hpp"
#include "liftscale/estimate.hpp"
#include "liftscale/infomeasure.hpp"
#include "liftscale/lift.hpp"
#include "liftscale/scaling.hpp"

namespace py = pybind11;
using namespace liftscale;

namespace {

JointDistribution as_joint(const py::handle& obj) {
  if (py::isinstance<DiscreteJoint>(obj)) return obj.cast<DiscreteJoint>();
  if (py::isinstance<BivariateNormal>(obj)) return NamedFamily{obj.cast<BivariateNormal>()};
  if (py::isinstance<CircularCauchy>(obj)) return NamedFamily{CircularCauchy{}};
  if (py::isinstance<IndependentProduct>(obj)) return NamedFamily{obj.cast<IndependentProduct>()};
  if (py::isinstance<CurveSingularJoint>(obj)) return obj.cast<CurveSingularJoint>();
  throw py::type_error("expected a distribution object");
}

py::dict mi_dict(const MiReport& r) {
  py::dict d;
  d["value"] = r.value;
  d["method"] = std::string(method_name(r.method));
  d["abs_error_estimate"] = r.abs_error_estimate;
  d["n_evals"] = r.n_evals;
  return d;
}

py::dict field_dict(const LiftField& f) {
  py::list labels;
  for (auto l : f.labels) labels.append(std::string(label_name(l)));
  py::dict d;
  d["x"] = f.grid_x;
  d["y"] = f.grid_y;
  d["values"] = f.values;
  d["labels"] = labels;
  return d;
}

std::vector<Point> to_points(const std::vector<std::pair<double, double>>& xy) {
  std::vector<Point> pts;
  pts.reserve(xy.size());
  for (auto [x, y] : xy) pts.push_back({x, y});
  return pts;
}

std::vector<std::pair<double, double>> from_points(const std::vector<Point>& pts) {
  std::vector<std::pair<double, double>> xy;
  xy.reserve(pts.size());
  for (const auto& p : pts) xy.emplace_back(p.x, p.y);
  return xy;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lift function, mutual information and local scaling";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> exc_storage;
  exc_storage.call_once_and_store_result([&] { return py::exception<Error>(m, "LiftscaleError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& cls = exc_storage.get_stored();
      py::object inst = cls(std::string(e.name()) + ": " + e.what());
      inst.attr("name") = std::string(e.name());
      PyErr_SetObject(cls.ptr(), inst.ptr());
    }
  });

  py::class_<Univariate>(m, "Univariate")
      .def_static("normal", &Univariate::normal, py::arg("mean") = 0.0, py::arg("sd") = 1.0)
      .def_static("uniform", &Univariate::uniform, py::arg("lo") = 0.0, py::arg("hi") = 1.0)
      .def_static("cauchy", &Univariate::cauchy, py::arg("location") = 0.0, py::arg("scale") = 1.0)
      .def_static("exponential", &Univariate::exponential, py::arg("rate") = 1.0)
      .def("pdf", &Univariate::pdf)
      .def("cdf", &Univariate::cdf);

  py::class_<DiscreteJoint>(m, "DiscreteJoint")
      .def(py::init<std::vector<double>, std::vector<double>, std::vector<double>>(), py::arg("x_support"),
           py::arg("y_support"), py::arg("pmf"))
      .def_static("from_rows", &DiscreteJoint::from_rows)
      .def_property_readonly("x_support", &DiscreteJoint::x_support)
      .def_property_readonly("y_support", &DiscreteJoint::y_support)
      .def_property_readonly("marginal_x", &DiscreteJoint::marginal_x)
      .def_property_readonly("marginal_y", &DiscreteJoint::marginal_y);

  py::class_<BivariateNormal>(m, "BivariateNormal")
      .def(py::init<double>(), py::arg("r"))
      .def_readonly("r", &BivariateNormal::r);
  py::class_<CircularCauchy>(m, "CircularCauchy").def(py::init<>());
  py::class_<IndependentProduct>(m, "IndependentProduct")
      .def(py::init([](const Univariate& x, const Univariate& y) { return IndependentProduct{x, y}; }));

  py::class_<CurveBranch>(m, "CurveBranch").def_readonly("weight", &CurveBranch::weight);
  m.def("linear_branch", &linear_branch, py::arg("slope"), py::arg("intercept"), py::arg("weight") = 1.0);
  m.def("quadratic_branch", &quadratic_branch, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("weight") = 1.0);
  py::class_<CurveSingularJoint>(m, "CurveSingularJoint")
      .def_static("from_marginal", &CurveSingularJoint::from_marginal, py::arg("marginal"), py::arg("branches"));

  m.def("density_at", [](const py::object& d, double x, double y) { return density_at(as_joint(d), x, y); });
  m.def("sample", [](const py::object& d, std::size_t n, std::uint64_t seed) {
    return from_points(sample(as_joint(d), n, seed));
  }, py::arg("dist"), py::arg("n"), py::arg("seed") = 42);

  m.def("lift_at", [](const py::object& d, double x, double y) {
    const auto j = as_joint(d);
    if (const auto* c = std::get_if<CurveSingularJoint>(&j)) return curve_lift_at(*c, x, y);
    if (const auto* nf = std::get_if<NamedFamily>(&j)) return continuous_lift_at(*nf, x, y);
    const auto f = lift_grid(j, {x}, {y});
    return f.values[0];
  });
  m.def("lift_grid", [](const py::object& d, const std::vector<double>& gx, const std::vector<double>& gy,
                        double tol) { return field_dict(lift_grid(as_joint(d), gx, gy, tol)); },
        py::arg("dist"), py::arg("grid_x"), py::arg("grid_y"), py::arg("tol") = kAnalyticTol);
  m.def("region_summary", [](const py::object& d, double tol) {
    const auto s = region_summary(as_joint(d), tol);
    py::dict r;
    r["mass_lift"] = s.mass_lift;
    r["mass_inhibit"] = s.mass_inhibit;
    r["mass_neutral"] = s.mass_neutral;
    return r;
  }, py::arg("dist"), py::arg("tol") = kAnalyticTol);
  m.def("sibuya_omega", [](const py::object& d, double x, double y) { return sibuya_omega_at(as_joint(d), x, y); });

  m.def("mutual_information", [](const py::object& d) { return mi_dict(mutual_information(as_joint(d))); });
  m.def("mi_bvn_closed_form", [](double r) { return mi_dict(mi_bvn_closed_form(r)); });
  m.def("mi_monte_carlo", [](const py::object& d, std::size_t n, std::uint64_t seed) {
    return mi_dict(mi_monte_carlo(as_joint(d), n, seed));
  }, py::arg("dist"), py::arg("n"), py::arg("seed") = 42);
  m.def("convergence_counterexample", [](const std::vector<double>& schedule) {
    py::list rows;
    for (const auto& r : convergence_counterexample(schedule)) {
      py::dict d;
      d["r"] = r.r;
      d["mi"] = r.mi;
      d["limit_mi"] = r.limit_mi;
      d["exceeds"] = r.exceeds;
      rows.append(d);
    }
    return rows;
  });

  m.def("scaling_exponent", [](const std::vector<std::pair<double, double>>& xy, std::pair<double, double> c,
                               double eps_max, double eps_min, std::size_t k) {
    const auto e = scaling_exponent(to_points(xy), {c.first, c.second}, eps_max, eps_min, k);
    py::dict d;
    d["s_hat"] = e.s_hat;
    d["fit_r2"] = e.fit_r2;
    d["radii_used"] = e.radii_used;
    return d;
  }, py::arg("points"), py::arg("center"), py::arg("eps_max") = 0.1, py::arg("eps_min") = 1e-3, py::arg("k") = 12);
  m.def("weierstrass", [](double x, int n_terms) { return weierstrass_eval(WeierstrassCurve{n_terms}, x); },
        py::arg("x"), py::arg("n_terms") = 30);

  m.def("kernel_lift", [](const std::vector<std::pair<double, double>>& xy, const std::vector<double>& gx,
                          const std::vector<double>& gy) {
    const auto e = kernel_lift(to_points(xy), gx, gy);
    py::dict d = field_dict(e.field);
    d["bandwidth_x"] = e.bandwidth_x;
    d["bandwidth_y"] = e.bandwidth_y;
    return d;
  });
  m.def("target_profile", [](const DiscreteJoint& d, double target_y) {
    const auto t = target_profile(d, target_y);
    py::dict r;
    r["x_opt"] = t.x_opt;
    r["lift_at_opt"] = t.lift_at_opt;
    r["baseline_rate"] = t.baseline_rate;
    r["boosted_rate"] = t.boosted_rate;
    r["expected_extra_per_n"] = t.expected_extra_per_n;
    return r;
  });
}

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "obslab/control.hpp"
#include "obslab/errors.hpp"
#include "obslab/interp.hpp"
#include "obslab/lab/commands.hpp"
#include "obslab/remez.hpp"
#include "obslab/semigroup.hpp"
#include "obslab/spectral.hpp"

namespace py = pybind11;
using namespace obslab;

namespace {

py::dict sweep_dict(const SweepSummary& s) {
  py::dict d;
  d["cases"] = s.cases;
  d["violations"] = s.violations;
  d["worst_ratio"] = s.worst_ratio;
  return d;
}

}  // namespace

PYBIND11_MODULE(_obslab, m) {
  m.doc() = "Spectral observability and control lab";

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
      .def_readonly("a", &PhysicalParams::a)
      .def_readonly("b", &PhysicalParams::b);

  py::class_<SpectralDomain>(m, "SpectralDomain")
      .def_static("interval", &SpectralDomain::interval, py::arg("length"),
                  py::arg("n_modes") = SpectralDomain::kDefaultIntervalModes,
                  py::arg("cells") = SpectralDomain::kDefaultIntervalCells)
      .def_static("rectangle", &SpectralDomain::rectangle, py::arg("length_x"),
                  py::arg("length_y"), py::arg("n_modes") = SpectralDomain::kDefaultRectangleModes,
                  py::arg("cells_x") = SpectralDomain::kDefaultRectangleCells,
                  py::arg("cells_y") = SpectralDomain::kDefaultRectangleCells)
      .def_property_readonly("n_modes", &SpectralDomain::n_modes)
      .def("eigenvalue", &SpectralDomain::eigenvalue);

  py::class_<SpectralState>(m, "SpectralState")
      .def(py::init<int>(), py::arg("n_modes"))
      .def_static("single_mode", &SpectralState::single_mode)
      .def_static("from_vector", &SpectralState::unflatten)
      .def("to_vector", &SpectralState::flatten)
      .def("norm", &SpectralState::norm);

  m.def("evolve", &evolve, py::arg("state"), py::arg("domain"), py::arg("params"), py::arg("t"));
  m.def("weyl_ratio", &weyl_ratio, py::arg("domain"), py::arg("lam"));

  m.def(
      "remez_sweep",
      [](int cases, std::uint64_t seed) { return sweep_dict(remez_sweep(cases, seed)); },
      py::arg("cases"), py::arg("seed"));
  m.def(
      "sine_bound_sweep",
      [](int cases, std::uint64_t seed) { return sweep_dict(sine_bound_sweep(cases, seed)); },
      py::arg("cases"), py::arg("seed"));

  m.def(
      "pointwise_failure_demo_multi",
      [](const SpectralDomain& domain, const PhysicalParams& params, int count, double horizon) {
        const PointwiseFailure f = pointwise_failure_demo_multi(domain, params, count, horizon);
        py::dict d;
        d["mode"] = f.example.mode;
        d["times"] = f.example.times;
        d["first_traces"] = f.first_traces;
        d["full_traces"] = f.full_traces;
        d["terminal_norm"] = f.terminal_norm;
        return d;
      },
      py::arg("domain"), py::arg("params"), py::arg("count"), py::arg("horizon"));

  m.def(
      "synthesize_null_control",
      [](const SpectralDomain& domain, const PhysicalParams& params, const SpectralState& v0,
         double horizon, int time_cells, double tol) {
        const NullControlProblem p{domain, params, v0,
                                   SpaceTimeSet::full(domain.grid(), time_cells, horizon)};
        const NullControlResult r = synthesize_null_control(p, tol);
        const DualityCertificate& c = r.certificate;
        py::dict d;
        d["terminal_norm"] = c.terminal_norm;
        d["initial_norm"] = c.initial_norm;
        d["l_hat"] = c.l_hat;
        d["control_bound"] = c.control_bound;
        d["control_sup"] = c.control_sup;
        d["values"] = r.control.values;
        return d;
      },
      py::arg("domain"), py::arg("params"), py::arg("v0"), py::arg("horizon"),
      py::arg("time_cells"), py::arg("tol") = 1e-2,
      "Null control on the full cylinder of the domain grid.");

  m.def(
      "execute",
      [](const std::string& subcommand, const std::vector<std::pair<std::string, std::string>>& overrides) {
        lab::ExperimentConfig config;
        for (const auto& [field, value] : overrides) config.set(field, value);
        config.validate();
        const lab::RunResult r = lab::execute(subcommand, config);
        return py::make_tuple(r.exit_code, r.report.render(false));
      },
      py::arg("subcommand"), py::arg("overrides") = std::vector<std::pair<std::string, std::string>>{},
      "Runs a lab subcommand in memory; returns (exit code, report without timings).");

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<lab::ConfigError>(m, "ConfigError", PyExc_ValueError);
}

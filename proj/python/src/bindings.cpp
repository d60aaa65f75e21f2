#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "stochhom/experiment.hpp"
#include "stochhom/homogenize.hpp"
#include "stochhom/oned.hpp"

namespace py = pybind11;
using namespace stochhom;

namespace {

py::dict report_dict(const ComparisonReport& report) {
  py::dict out;
  for (Quantity q : kAllQuantities) {
    const auto& c = report[q];
    py::dict d;
    d["mc_mean"] = c.mc.mean;
    d["mc_var"] = c.mc.variance;
    d["av_mean"] = c.av.mean;
    d["av_var"] = c.av.variance;
    d["v_mc"] = c.v_mc;
    d["v_av"] = c.v_av;
    d["ratio"] = c.ratio;
    d["ratio_defined"] = c.ratio_defined;
    d["ratio_ci"] = py::make_tuple(c.ratio_ci_low, c.ratio_ci_high);
    out[py::str(std::string(to_string(q)))] = d;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_stochhom, m) {
  m.doc() = "Antithetic variance reduction for nonlinear stochastic homogenization";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<PipelineError>(m, "PipelineError", PyExc_RuntimeError);
  py::register_exception<RealizationError>(m, "RealizationError", PyExc_RuntimeError);

  py::class_<EnergyParams>(m, "EnergyParams")
      .def(py::init<double, double, double>(), py::arg("p"), py::arg("a"), py::arg("c"))
      .def_property_readonly("p", &EnergyParams::p)
      .def_property_readonly("a", &EnergyParams::a)
      .def_property_readonly("c", &EnergyParams::c);

  m.def("energy_value", py::overload_cast<const EnergyParams&, const Vec2&>(&energy_value));
  m.def("energy_gradient", &energy_gradient);
  m.def("energy_hessian", &energy_hessian);
  m.def("inverse_derivative", &inverse_derivative, py::arg("params"), py::arg("zeta"));

  py::class_<Distribution>(m, "Distribution")
      .def_static("constant", &Distribution::constant)
      .def_static("bernoulli", &Distribution::bernoulli, py::arg("lo"), py::arg("hi"))
      .def_static("parse", &Distribution::parse)
      .def("inverse_cdf", &Distribution::inverse_cdf)
      .def("__repr__", &Distribution::to_string)
      .def("__str__", &Distribution::to_string)
      .def(py::self == py::self);

  py::class_<UniformDraws>(m, "UniformDraws")
      .def_readonly("seed", &UniformDraws::seed)
      .def_readonly("realization", &UniformDraws::realization)
      .def_readonly("antithetic", &UniformDraws::antithetic)
      .def_readonly("a_channel", &UniformDraws::a_channel)
      .def_readonly("c_channel", &UniformDraws::c_channel);
  m.def("draw_uniforms", &draw_uniforms, py::arg("seed"), py::arg("realization"), py::arg("n_cells"));
  m.def("antithetic", &antithetic);

  py::class_<CoefficientField>(m, "CoefficientField")
      .def_static("uniform", &CoefficientField::uniform, py::arg("half_width"), py::arg("a"), py::arg("c"))
      .def_readonly("half_width", &CoefficientField::half_width)
      .def_readonly("dim", &CoefficientField::dim)
      .def_readwrite("a_cells", &CoefficientField::a_cells)
      .def_readwrite("c_cells", &CoefficientField::c_cells)
      .def("index", &CoefficientField::index)
      .def("shifted", &CoefficientField::shifted)
      .def("dump", [](const CoefficientField& f) {
        std::ostringstream out;
        f.dump(out);
        return out.str();
      });
  m.def("realize_field", &realize_field, py::arg("dist_a"), py::arg("dist_c"), py::arg("draws"),
        py::arg("half_width"), py::arg("dim") = 2);

  py::class_<PeriodicMesh>(m, "PeriodicMesh")
      .def(py::init<int, double, int>(), py::arg("half_width"), py::arg("h"), py::arg("dim") = 2)
      .def_property_readonly("n_nodes", &PeriodicMesh::n_nodes)
      .def_property_readonly("n_triangles", &PeriodicMesh::n_triangles)
      .def_property_readonly("h", &PeriodicMesh::h);

  py::class_<NewtonConfig>(m, "NewtonConfig")
      .def(py::init<>())
      .def_readwrite("tol", &NewtonConfig::tol)
      .def_readwrite("max_iterations", &NewtonConfig::max_iterations)
      .def_readwrite("hessian_regularization", &NewtonConfig::hessian_regularization)
      .def_readwrite("max_halvings", &NewtonConfig::max_halvings);

  py::class_<HomogenizedOutputs>(m, "HomogenizedOutputs")
      .def_readonly("xi", &HomogenizedOutputs::xi)
      .def_readonly("value", &HomogenizedOutputs::value)
      .def_readonly("grad", &HomogenizedOutputs::grad)
      .def_readonly("hess", &HomogenizedOutputs::hess)
      .def_readonly("axial_first", &HomogenizedOutputs::axial_first)
      .def_readonly("axial_second", &HomogenizedOutputs::axial_second);

  py::class_<SolveLog>(m, "SolveLog")
      .def_readonly("newton_iterations", &SolveLog::newton_iterations)
      .def_readonly("increments", &SolveLog::increments)
      .def_readonly("final_residual", &SolveLog::final_residual)
      .def_readonly("regularized", &SolveLog::regularized);

  py::class_<PipelineResult>(m, "PipelineResult")
      .def_readonly("outputs", &PipelineResult::outputs)
      .def_property_readonly("corrector", [](const PipelineResult& r) { return r.corrector.w; })
      .def_readonly("sensitivities", &PipelineResult::sensitivities)
      .def_readonly("log", &PipelineResult::log);

  m.def("full_pipeline", &full_pipeline, py::arg("field"), py::arg("p"), py::arg("xi"), py::arg("mesh"),
        py::arg("config") = NewtonConfig{}, py::call_guard<py::gil_scoped_release>());

  py::class_<OneDProblem>(m, "OneDProblem")
      .def(py::init<double, const std::vector<double>&, const std::vector<double>&>(), py::arg("p"), py::arg("a"),
           py::arg("c"))
      .def_static("from_field", &OneDProblem::from_field)
      .def("__len__", &OneDProblem::size);
  m.def("oned_value_wstar", &oned_value_wstar);
  m.def("oned_grad_wstar", &oned_grad_wstar);
  m.def("oned_hess_wstar", [](const OneDProblem& problem, double xi) {
    const auto h = oned_hess_wstar(problem, xi);
    return py::make_tuple(h.value, h.degenerate);
  });

  m.attr("QUANTITIES") = [] {
    py::list names;
    for (Quantity q : kAllQuantities) names.append(std::string(to_string(q)));
    return names;
  }();

  m.def(
      "compare_samples",
      [](const std::vector<double>& mc, const std::vector<double>& av) {
        const auto c = compare_samples(mc, av, 0);
        return py::make_tuple(c.v_mc, c.v_av, c.ratio);
      },
      py::arg("mc"), py::arg("av"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_static("for_test_case",
                  [](const std::string& name) { return parse_config_text("test_case = " + name); })
      .def_readwrite("p", &ExperimentConfig::p)
      .def_readwrite("xi", &ExperimentConfig::xi)
      .def_readwrite("sizes", &ExperimentConfig::sizes)
      .def_readwrite("samples_2m", &ExperimentConfig::samples_2m)
      .def_readwrite("mesh_h", &ExperimentConfig::mesh_h)
      .def_readwrite("newton_tol", &ExperimentConfig::newton_tol)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("dist_a", &ExperimentConfig::dist_a)
      .def_readwrite("dist_c", &ExperimentConfig::dist_c)
      .def_readwrite("output_dir", &ExperimentConfig::output_dir)
      .def_property_readonly("test_case", [](const ExperimentConfig& c) { return std::string(to_string(c.test_case)); })
      .def("validate", &ExperimentConfig::validate);
  m.def("parse_config_text", &parse_config_text);
  m.def("parse_config", &parse_config);

  m.def(
      "run_experiment",
      [](const ExperimentConfig& config, int threads, bool write_files, bool emit_plots) {
        RunSettings settings;
        settings.threads = threads;
        settings.write_files = write_files;
        settings.emit_plots = emit_plots;
        ExperimentResults results;
        {
          py::gil_scoped_release release;
          results = run_experiment(config, settings);
        }
        py::list sizes;
        for (const auto& s : results.sizes) {
          py::dict d;
          d["two_n"] = s.two_n;
          d["half_width"] = s.half_width;
          d["wall_seconds"] = s.wall_seconds;
          d["quantities"] = report_dict(s.report);
          sizes.append(d);
        }
        py::dict out;
        out["sizes"] = sizes;
        out["csv"] = results_csv(results);
        return out;
      },
      py::arg("config"), py::arg("threads") = 1, py::arg("write_files") = true, py::arg("emit_plots") = false);
}

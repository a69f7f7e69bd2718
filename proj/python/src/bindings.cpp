#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "specode/codes.hpp"
#include "specode/correlation.hpp"
#include "specode/dynamics.hpp"
#include "specode/io.hpp"
#include "specode/layout.hpp"
#include "specode/runner.hpp"
#include "specode/schmidt.hpp"
#include "specode/spectra.hpp"

namespace py = pybind11;
using namespace specode;

namespace {

FrequencyGrid grid_from(double lo, double hi, std::size_t n) {
  FrequencyGrid g{lo, hi, n};
  g.validate();
  return g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Frequency-coded biphoton simulator core";
  m.attr("__version__") = version();

  auto base = py::register_exception<Error>(m, "SpecodeError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<UnderResolvedGrid>(m, "UnderResolvedGrid", base.ptr());
  py::register_exception<DegenerateMatrix>(m, "DegenerateMatrix", base.ptr());
  py::register_exception<CycleDetected>(m, "CycleDetected", base.ptr());
  py::register_exception<Overflow>(m, "Overflow", base.ptr());

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_readwrite("gamma3N", &PhysicalParams::gamma3N)
      .def_readwrite("tau", &PhysicalParams::tau)
      .def_readwrite("delta1", &PhysicalParams::delta1)
      .def_readwrite("delta2", &PhysicalParams::delta2)
      .def_readwrite("omega_a_tilde", &PhysicalParams::omega_a_tilde)
      .def_readwrite("omega_b_tilde", &PhysicalParams::omega_b_tilde)
      .def_readwrite("coupling_prefactor", &PhysicalParams::coupling_prefactor);

  py::class_<PairShift>(m, "PairShift")
      .def(py::init([](cplx w, double dp, double dq) { return PairShift{w, dp, dq}; }), py::arg("weight") = cplx(1.0),
           py::arg("delta_p") = 0.0, py::arg("delta_q") = 0.0)
      .def_readwrite("weight", &PairShift::weight)
      .def_readwrite("delta_p", &PairShift::delta_p)
      .def_readwrite("delta_q", &PairShift::delta_q);

  m.def("jsa", [](const PhysicalParams& p, const std::vector<PairShift>& pairs, double lo, double hi,
                  std::size_t n) { return sample_jsa({p, pairs}, grid_from(lo, hi, n), grid_from(lo, hi, n)).values; },
        py::arg("params"), py::arg("pairs"), py::arg("lo"), py::arg("hi"), py::arg("points"),
        "Joint amplitude on a square grid; rows are signal samples.");
  m.def("schmidt_spectrum",
        [](const PhysicalParams& p, const std::vector<PairShift>& pairs, double lo, double hi, std::size_t n) {
          const SchmidtDecomposition d = decompose({p, pairs}, grid_from(lo, hi, n), grid_from(lo, hi, n), 1);
          return py::make_tuple(d.lambdas, entropy(d));
        },
        py::arg("params"), py::arg("pairs"), py::arg("lo"), py::arg("hi"), py::arg("points"),
        "Returns (lambdas, entropy).");

  m.def("make_c_linear", [](std::size_t n, double h) { return make_c(CodeVectorSpec::linear(n, h)); });
  m.def("make_c_geometric", [](std::size_t n, cplx a, cplx r) { return make_c(CodeVectorSpec::geometric(n, a, r)); });
  m.def("alamouti", [](const CVector& c) { return alamouti_n(c, c.size()); });
  m.def("unit_g2", &unit_g2);
  m.def("g2_matrix", [](const CodeMatrix& code, double prefactor) { return g2_matrix_ideal(code, prefactor).values; },
        py::arg("code"), py::arg("prefactor") = 1.0);

  py::class_<ContrastReport>(m, "ContrastReport")
      .def_readonly("v", &ContrastReport::v)
      .def_readonly("c_od", &ContrastReport::c_od)
      .def_readonly("c_non", &ContrastReport::c_non)
      .def_readonly("g2_max", &ContrastReport::g2_max)
      .def_readonly("g2_od", &ContrastReport::g2_od);
  m.def("contrasts", [](const Eigen::MatrixXd& values, std::size_t r) {
    const std::size_t d = static_cast<std::size_t>(values.rows());
    std::size_t mm = d;
    if (r > 1) mm = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(d), 1.0 / static_cast<double>(r))));
    return contrasts(G2Matrix{values, r, mm}, r);
  }, py::arg("values"), py::arg("r_channels") = 1);
  m.def("multichannel_levels", [](std::size_t r, std::size_t mm, double h) {
    const LevelSummary s = level_summary_ideal_multi(alamouti_n(make_c(CodeVectorSpec::linear(mm, h)), mm), r, 1.0);
    py::list out;
    for (const Level& l : s.levels) out.append(py::make_tuple(l.value, l.matched_channels, l.multiplicity));
    return py::make_tuple(out, contrasts(s));
  }, py::arg("r"), py::arg("m"), py::arg("h"), "Returns ([(value, matched, multiplicity)], ContrastReport).");

  m.def("staircase_report", [](std::size_t r, std::size_t mm) {
    const ChannelLayout l = staircase(r, mm);
    const ValidationReport v = inspect(l);
    py::dict d;
    d["valid"] = v.valid;
    d["dof"] = v.dof;
    d["dimension"] = dimension(l);
    d["signal_bins"] = l.signal_bins;
    d["idler_bins"] = l.idler_bins;
    return d;
  });

  m.def("dynamics_check", [](double omega_a, double omega_b, double delta) {
    DriveParams d;
    d.omega_a_tilde = omega_a;
    d.omega_b_tilde = omega_b;
    d.delta1 = d.delta2 = delta;
    const DynamicsComparison c = compare_dynamics(d, ModeGrids{});
    py::dict out;
    out["shape_deviation"] = c.shape_deviation;
    out["peak_ratio"] = c.peak_ratio;
    out["max_abs_d"] = c.max_abs_d;
    out["a_error"] = c.tracking.a_error;
    out["b_error"] = c.tracking.b_error;
    return out;
  }, py::arg("omega_a") = 1.0, py::arg("omega_b") = 1.0, py::arg("delta") = 50.0);

  m.def("run_command", [](const std::string& cmd, const std::string& config, const std::filesystem::path& out) {
    const RunResult r = run_command(cmd, config, out);
    return py::make_tuple(r.exit_code, r.summary, r.error);
  }, py::arg("subcommand"), py::arg("config"), py::arg("out_dir") = std::filesystem::path{},
        "Returns (exit_code, summary_json, error).");
}

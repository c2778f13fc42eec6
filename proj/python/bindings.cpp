#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dampedmodes/cli.hpp"
#include "dampedmodes/config.hpp"
#include "dampedmodes/errors.hpp"
#include "dampedmodes/floquet.hpp"
#include "dampedmodes/impedance.hpp"
#include "dampedmodes/modes.hpp"
#include "dampedmodes/spectral.hpp"

namespace py = pybind11;
using namespace dampedmodes;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bands, interface impedance and localized modes of damped layered media";

  py::register_exception<Error>(m, "Error");

  py::class_<Layer>(m, "Layer")
      .def(py::init<double, double, double>(), py::arg("eps_re"), py::arg("eps_im_coeff"), py::arg("width"))
      .def_readwrite("eps_re", &Layer::eps_re)
      .def_readwrite("eps_im_coeff", &Layer::eps_im_coeff)
      .def_readwrite("width", &Layer::width);

  py::class_<UnitCell>(m, "UnitCell")
      .def(py::init([](std::vector<Layer> layers, std::string label) { return UnitCell{std::move(layers), label}; }),
           py::arg("layers"), py::arg("label") = "")
      .def_readwrite("layers", &UnitCell::layers)
      .def_readwrite("label", &UnitCell::label);

  py::class_<DampedMedium>(m, "DampedMedium")
      .def_readonly("mu0", &DampedMedium::mu0)
      .def_readonly("delta", &DampedMedium::delta);

  py::class_<InterfaceMedium>(m, "InterfaceMedium")
      .def(py::init([](UnitCell a, UnitCell b, double mu0, double delta) {
             return InterfaceMedium{std::move(a), std::move(b), mu0, delta};
           }),
           py::arg("cell_a"), py::arg("cell_b"), py::arg("mu0") = 1.0, py::arg("delta") = 0.0)
      .def_readwrite("cell_a", &InterfaceMedium::cell_a)
      .def_readwrite("cell_b", &InterfaceMedium::cell_b)
      .def_readwrite("mu0", &InterfaceMedium::mu0)
      .def_readwrite("delta", &InterfaceMedium::delta)
      .def("damped", py::overload_cast<double>(&InterfaceMedium::damped, py::const_), py::arg("delta"));

  m.def("reference_medium", &reference_medium, py::arg("delta") = 0.0);
  m.def("load_medium", &load_medium, py::arg("path"));
  m.def("validate_cell", [](const UnitCell& c) {
    std::vector<std::string> out;
    for (const auto& i : validate_cell(c).issues) out.emplace_back(to_string(i.kind));
    return out;
  });

  m.def("cell_matrix", [](const UnitCell& cell, double delta, cplx omega, double mu0) {
    const TransferMatrix t = cell_matrix(with_damping(cell, delta), omega, mu0);
    return std::vector<std::vector<cplx>>{{t.t11, t.t12}, {t.t21, t.t22}};
  }, py::arg("cell"), py::arg("delta"), py::arg("omega"), py::arg("mu0") = 1.0);
  m.def("discriminant", [](const UnitCell& cell, double delta, cplx omega, double mu0) {
    return discriminant(with_damping(cell, delta), omega, mu0);
  }, py::arg("cell"), py::arg("delta"), py::arg("omega"), py::arg("mu0") = 1.0);
  m.def("real_gaps", [](const UnitCell& cell, double mu0, double omega_max) {
    std::vector<std::pair<double, double>> out;
    for (const auto& g : real_gaps(with_damping(cell, 0.0), mu0, omega_max)) out.emplace_back(g.lo, g.hi);
    return out;
  }, py::arg("cell"), py::arg("mu0"), py::arg("omega_max"));

  m.def("interface_impedance", [](const InterfaceMedium& medium, double delta, cplx omega) {
    return interface_impedance(medium.damped(delta), omega).z;
  }, py::arg("medium"), py::arg("delta"), py::arg("omega"));

  m.def("find_root_real", [](const InterfaceMedium& medium, double lo, double hi) {
    const RootResult r = find_root_real(medium.damped(0.0), Interval{lo, hi});
    return py::make_tuple(r.omega.real(), r.residual, r.winding);
  }, py::arg("medium"), py::arg("lo"), py::arg("hi"));

  m.def("track_root", [](const InterfaceMedium& medium, double lo, double hi, double delta) {
    const RootResult seed = find_root_real(medium.damped(0.0), Interval{lo, hi});
    const RootResult r = delta > 0.0 ? final_root(continuation(medium, seed, delta)) : seed;
    return py::make_tuple(r.omega, r.residual, r.winding);
  }, py::arg("medium"), py::arg("lo"), py::arg("hi"), py::arg("delta"));

  m.def("winding_number", [](const InterfaceMedium& medium, double delta, double re_min, double re_max,
                             double im_min, double im_max) {
    return winding_number(medium.damped(delta), Rect{re_min, re_max, im_min, im_max});
  });

  m.def("mode_lattice", [](const InterfaceMedium& medium, double delta, cplx omega, int n_cells) {
    const ModeProfile p = interface_mode_profile(medium.damped(delta), omega, n_cells, 8);
    std::vector<std::tuple<int, cplx, cplx>> out;
    for (const auto& v : p.lattice) out.emplace_back(v.n, v.u, v.flux);
    return out;
  }, py::arg("medium"), py::arg("delta"), py::arg("omega"), py::arg("n_cells"));

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "dampedmodes");
    return run_cli(args);
  }, py::arg("args"));
}

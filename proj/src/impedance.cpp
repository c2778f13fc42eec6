#include "dampedmodes/impedance.hpp"

#include <limits>
#include <stdexcept>

#include "dampedmodes/errors.hpp"

namespace dampedmodes {

namespace {

struct SideImpedance {
  cplx z;
  bool pole;
};

SideImpedance side_impedance(const DampedCell& cell, double mu0, cplx omega, double pole_tol) {
  const EigenSplit e = stable_eigenpair(cell_matrix(cell, omega, mu0));
  const cplx v1 = e.v_in.u, v2 = e.v_in.flux;
  if (std::abs(v2) < pole_tol * std::abs(v1)) {
    return {cplx(std::numeric_limits<double>::infinity(), 0.0), true};
  }
  return {v1 / v2, false};
}

}  // namespace

cplx surface_impedance_right(const DampedCell& cell_b, double mu0, cplx omega, double pole_tol) {
  const auto s = side_impedance(cell_b, mu0, omega, pole_tol);
  if (s.pole) throw PoleDetected("Z_B has a pole at this frequency");
  return s.z;
}

cplx surface_impedance_left(const DampedCell& cell_a, double mu0, cplx omega, double pole_tol) {
  // -(V1) / (-V2) on the reflected vector.
  const auto s = side_impedance(cell_a, mu0, omega, pole_tol);
  if (s.pole) throw PoleDetected("Z_A has a pole at this frequency");
  return s.z;
}

ImpedanceSample interface_impedance(const DampedMedium& medium, cplx omega, double pole_tol) {
  const auto a = side_impedance(medium.cell_a, medium.mu0, omega, pole_tol);
  const auto b = side_impedance(medium.cell_b, medium.mu0, omega, pole_tol);
  ImpedanceSample s;
  s.omega = omega;
  s.z_a = a.z;
  s.z_b = b.z;
  s.pole_a = a.pole;
  s.pole_b = b.pole;
  s.z = s.has_pole() ? cplx(std::numeric_limits<double>::infinity(), 0.0) : a.z + b.z;
  return s;
}

cplx interface_pairing(const DampedMedium& medium, cplx omega) {
  const CellState va = stable_eigenpair(cell_matrix(medium.cell_a, omega, medium.mu0)).v_in;
  const CellState vb = stable_eigenpair(cell_matrix(medium.cell_b, omega, medium.mu0)).v_in;
  return -vb.flux * va.u - vb.u * va.flux;
}

std::vector<ImpedanceSample> impedance_scan(const DampedMedium& medium, const Rect& region, int nx, int ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("impedance_scan: empty grid");
  std::vector<ImpedanceSample> out;
  out.reserve(static_cast<std::size_t>(nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double re = nx == 1 ? region.center().real() : region.re_min + region.width() * i / (nx - 1);
      const double im = ny == 1 ? region.center().imag() : region.im_min + region.height() * j / (ny - 1);
      out.push_back(interface_impedance(medium, cplx(re, im)));
    }
  }
  return out;
}

}  // namespace dampedmodes

#pragma once

// Independent reference computations used only by the tests: fine-step RK4
// integration of the first-order system, dense scans and brute-force phase
// tracking. None of this shares code with the library's closed forms.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

struct State {
  cplx u{};
  cplx flux{};
};

/// (u, flux)' = (eps flux, -mu0 omega^2 u) across a constant-eps segment of signed length `length`.
inline State rk4_segment(cplx eps, double length, cplx omega, double mu0, State s, int steps) {
  const double h = length / steps;
  const cplx w2 = mu0 * omega * omega;
  auto rhs = [&](const State& y) { return State{eps * y.flux, -w2 * y.u}; };
  for (int i = 0; i < steps; ++i) {
    const State k1 = rhs(s);
    const State k2 = rhs({s.u + 0.5 * h * k1.u, s.flux + 0.5 * h * k1.flux});
    const State k3 = rhs({s.u + 0.5 * h * k2.u, s.flux + 0.5 * h * k2.flux});
    const State k4 = rhs({s.u + h * k3.u, s.flux + h * k3.flux});
    s.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
    s.flux += h / 6.0 * (k1.flux + 2.0 * k2.flux + 2.0 * k3.flux + k4.flux);
  }
  return s;
}

struct Segment {
  cplx eps;
  double width;
};

/// Integrates left to right through the segments (right to left if backward).
inline State rk4_cell(const std::vector<Segment>& cell, cplx omega, double mu0, State s, int steps_per_period,
                      bool backward = false) {
  const std::size_t n = cell.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Segment& seg = cell[backward ? n - 1 - k : k];
    const int steps = std::max(1, static_cast<int>(std::lround(seg.width * steps_per_period)));
    s = rk4_segment(seg.eps, backward ? -seg.width : seg.width, omega, mu0, s, steps);
  }
  return s;
}

/// Monodromy matrix {t11, t12, t21, t22} from the two unit initial states.
inline std::array<cplx, 4> rk4_monodromy(const std::vector<Segment>& cell, cplx omega, double mu0,
                                         int steps_per_period) {
  const State c1 = rk4_cell(cell, omega, mu0, {1.0, 0.0}, steps_per_period);
  const State c2 = rk4_cell(cell, omega, mu0, {0.0, 1.0}, steps_per_period);
  return {c1.u, c2.u, c1.flux, c2.flux};
}

/// Points where g changes sign on a uniform grid of n intervals, each bisected to `tol`.
inline std::vector<double> sign_changes(const std::function<double(double)>& g, double lo, double hi, int n,
                                        double tol = 1e-13) {
  std::vector<double> out;
  double a = lo, ga = g(lo);
  for (int i = 1; i <= n; ++i) {
    const double b = lo + (hi - lo) * i / n;
    const double gb = g(b);
    if ((ga < 0.0) != (gb < 0.0)) {
      double l = a, r = b, gl = ga;
      while (r - l > tol) {
        const double m = 0.5 * (l + r);
        const double gm = g(m);
        if ((gm < 0.0) == (gl < 0.0)) {
          l = m;
          gl = gm;
        } else {
          r = m;
        }
      }
      out.push_back(0.5 * (l + r));
    }
    a = b;
    ga = gb;
  }
  return out;
}

/// Winding number of z along the boundary of [re0, re1] x [im0, im1] from
/// `samples` uniform points with principal-value phase increments.
inline int dense_winding(const std::function<cplx(cplx)>& z, double re0, double re1, double im0, double im1,
                         int samples) {
  const std::array<cplx, 5> corners{cplx{re0, im0}, cplx{re1, im0}, cplx{re1, im1}, cplx{re0, im1}, cplx{re0, im0}};
  const double perimeter = 2.0 * ((re1 - re0) + (im1 - im0));
  double total = 0.0;
  cplx prev = z(corners[0]);
  for (int e = 0; e < 4; ++e) {
    const double len = std::abs(corners[e + 1] - corners[e]);
    const int m = std::max(1, static_cast<int>(samples * len / perimeter));
    for (int i = 1; i <= m; ++i) {
      const cplx cur = z(corners[e] + (corners[e + 1] - corners[e]) * (static_cast<double>(i) / m));
      total += std::arg(cur / prev);
      prev = cur;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

}  // namespace oracle

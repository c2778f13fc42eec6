#include <doctest.h>

#include <cmath>

#include "dampedmodes/errors.hpp"
#include "dampedmodes/impedance.hpp"
#include "dampedmodes/spectral.hpp"
#include "helpers.hpp"

using namespace dampedmodes;
using testing_support::segments;

namespace {

constexpr int kSteps = 20000;  // RK4 steps per period in the half-space oracle
constexpr int kCells = 100;      // distance of the arbitrary seed from the interface

/// u / flux at x0+ of the solution that decays to the right, obtained blindly:
/// start from an arbitrary state kCells cells out and integrate back to x0. The
/// decaying solution dominates by |lambda_in|^(-2 kCells).
cplx right_halfspace_ratio(const DampedCell& cell, cplx omega) {
  oracle::State s{1.0, 0.3};
  for (int n = 0; n < kCells; ++n) s = oracle::rk4_cell(segments(cell), omega, 1.0, s, kSteps, /*backward=*/true);
  return s.u / s.flux;
}

/// u / flux at x0- of the solution that decays to the left, integrating from kCells cells out.
cplx left_halfspace_ratio(const DampedCell& cell, cplx omega) {
  oracle::State s{1.0, 0.3};
  for (int n = 0; n < kCells; ++n) s = oracle::rk4_cell(segments(cell), omega, 1.0, s, kSteps);
  return s.u / s.flux;
}

/// Undamped interface root by bisection of the real impedance over a dense scan.
double bisected_root(const DampedMedium& m, Interval gap) {
  const auto r = oracle::sign_changes(
      [&m](double w) { return interface_impedance(m, w).z.real(); }, gap.lo + 1e-6, gap.hi - 1e-6, 10000, 1e-13);
  REQUIRE(r.size() == 1);
  return r[0];
}

}  // namespace

TEST_CASE("right surface impedance is the eigenvector ratio and matches the half-space oracle") {
  const Interval gap = testing_support::ref_first_gap();
  const double mid = gap.mid();
  const UnitCell b = reference_medium().cell_b;

  const DampedCell b0 = with_damping(b, 0.0);
  const cplx z0 = surface_impedance_right(b0, 1.0, mid);
  CHECK(z0.imag() == 0.0);
  CHECK(std::abs(z0 - right_halfspace_ratio(b0, mid)) < 1e-8 * std::max(1.0, std::abs(z0)));

  const DampedCell b1 = with_damping(b, 0.1);
  const cplx z1 = surface_impedance_right(b1, 1.0, mid);
  CHECK(std::abs(z1.imag()) > 1e-4);
  CHECK(std::abs(z1 - right_halfspace_ratio(b1, mid)) < 1e-8 * std::max(1.0, std::abs(z1)));

  // Scaling invariance: any multiple of the stable eigenvector gives the same ratio.
  const EigenSplit e = stable_eigenpair(cell_matrix(b1, mid, 1.0));
  for (cplx s : {cplx(2.0, 0.0), cplx(-0.3, 7.0), cplx(1e-5, 1e-5)}) {
    const CellState v = s * e.v_in;
    CHECK(std::abs(v.u / v.flux - z1) < 1e-12 * std::abs(z1));
  }
}

TEST_CASE("left surface impedance matches the half-space oracle with the sign of the definition") {
  const Interval gap = testing_support::ref_first_gap();
  const UnitCell a = reference_medium().cell_a;
  for (double w : {gap.lo + 0.05, gap.mid(), gap.hi - 0.05}) {
    const DampedCell a0 = with_damping(a, 0.0);
    const cplx z0 = surface_impedance_left(a0, 1.0, w);
    CHECK(z0.imag() == 0.0);
    CHECK(std::abs(z0 + left_halfspace_ratio(a0, w)) < 1e-8 * std::max(1.0, std::abs(z0)));
    const DampedCell a1 = with_damping(a, 0.3);
    const cplx z1 = surface_impedance_left(a1, 1.0, cplx(w, -0.05));
    CHECK(std::abs(z1 + left_halfspace_ratio(a1, cplx(w, -0.05))) < 1e-8 * std::max(1.0, std::abs(z1)));
  }
}

TEST_CASE("mirror pair: left impedance of a cell equals right impedance of its reversal") {
  const Interval gap = testing_support::ref_first_gap();
  for (const UnitCell& c : {reference_medium().cell_a, reference_medium().cell_b}) {
    for (cplx w : {cplx(gap.mid(), 0.0), cplx(gap.lo + 0.1, -0.1)}) {
      const cplx za = surface_impedance_left(with_damping(c, 0.2), 1.0, w);
      const cplx zb = surface_impedance_right(with_damping(c.reversed(), 0.2), 1.0, w);
      CHECK(std::abs(za - zb) < 1e-12 * std::max(1.0, std::abs(za)));
    }
  }
}

TEST_CASE("gluing a crystal to itself gives no zero of Z") {
  const Interval gap = testing_support::ref_first_gap();
  const DampedCell b = with_damping(reference_medium().cell_b, 0.0);
  const DampedMedium same{b, b, 1.0, 0.0};
  for (int i = 1; i < 50; ++i) {
    const double w = gap.lo + gap.width() * i / 50;
    const ImpedanceSample s = interface_impedance(same, w);
    CHECK(std::abs(s.z - 2.0 * s.z_b) < 1e-14 * std::abs(s.z));
    CHECK(std::abs(s.z) > 1e-3);
    CHECK(std::abs(interface_pairing(same, w)) > 1e-6);
  }
}

TEST_CASE("impedance and pairing vanish at the undamped interface root") {
  const DampedMedium m = reference_medium().damped(0.0);
  const double w_u = bisected_root(m, testing_support::ref_first_gap());
  const ImpedanceSample s = interface_impedance(m, w_u);
  CHECK_FALSE(s.has_pole());
  CHECK(std::abs(s.z) < 1e-10);
  CHECK(std::abs(s.z - (s.z_a + s.z_b)) == 0.0);
  CHECK(std::abs(interface_pairing(m, w_u)) < 1e-10);

  // Near the gap edges Z is finite and clearly nonzero.
  const Interval gap = testing_support::ref_first_gap();
  for (double w : {gap.lo + 1e-3, gap.hi - 1e-3}) {
    const ImpedanceSample e = interface_impedance(m, w);
    CHECK(std::isfinite(std::abs(e.z)));
    CHECK(std::abs(e.z) > 1e-2);
  }

  // A tiny damping moves the root off the undamped frequency.
  const double z_small = std::abs(interface_impedance(reference_medium().damped(5e-5), w_u).z);
  CHECK(z_small > 1e-8);
  CHECK(z_small < 1e-3);
}

TEST_CASE("pairing zero set does not depend on eigenvector normalization") {
  const DampedMedium m = reference_medium().damped(0.0);
  const double w_u = bisected_root(m, testing_support::ref_first_gap());
  for (double w : {w_u, w_u + 0.1}) {
    const EigenSplit ea = stable_eigenpair(cell_matrix(m.cell_a, w, 1.0));
    const EigenSplit eb = stable_eigenpair(cell_matrix(m.cell_b, w, 1.0));
    auto pairing = [](const CellState& va, const CellState& vb) { return -vb.flux * va.u - vb.u * va.flux; };
    const cplx p1 = pairing(ea.v_in, eb.v_in);
    const cplx p2 = pairing(cplx(3.0, -1.0) * ea.v_in, cplx(0.01, 0.2) * eb.v_in);
    CHECK((std::abs(p1) < 1e-12) == (std::abs(p2) < 1e-12));
    CHECK(std::abs(p1 - interface_pairing(m, w)) < 1e-15);
  }
}

TEST_CASE("pairing vanishes at the tracked damped root") {
  const InterfaceMedium ref = reference_medium();
  const RootResult r0 = find_root_real(ref.damped(0.0), testing_support::ref_first_gap());
  const RootResult r = final_root(continuation(ref, r0, 0.5));
  CHECK(std::abs(interface_pairing(ref.damped(0.5), r.omega)) < 1e-8);
  CHECK(std::abs(interface_impedance(ref.damped(0.5), r.omega).z) < 1e-8);
}

TEST_CASE("pairing and impedance have the same zero set on a grid") {
  // pairing = -V2A V2B Z, so away from eigenvector poles the two agree up to a nonzero factor.
  const DampedMedium m = reference_medium().damped(0.5);
  const auto r = locate_roots(m, Rect{1.75, 2.35, -0.25, 0.0});
  REQUIRE(r.size() == 1);
  for (int j = 0; j < 30; ++j) {
    for (int i = 0; i < 30; ++i) {
      const cplx w{1.75 + 0.6 * i / 29, -0.25 + 0.25 * j / 29};
      const ImpedanceSample s = interface_impedance(m, w);
      REQUIRE_FALSE(s.has_pole());
      const EigenSplit ea = stable_eigenpair(cell_matrix(m.cell_a, w, 1.0));
      const EigenSplit eb = stable_eigenpair(cell_matrix(m.cell_b, w, 1.0));
      CHECK(std::abs(interface_pairing(m, w) + ea.v_in.flux * eb.v_in.flux * s.z) < 1e-13);
    }
  }
  CHECK(std::abs(interface_pairing(m, r[0].omega)) < 1e-10);
}

TEST_CASE("undamped impedance is real on the real axis and finite off it") {
  const DampedMedium m = reference_medium().damped(0.0);
  const Interval gap = testing_support::ref_first_gap();
  for (int i = 1; i < 100; ++i) {
    const double w = gap.lo + gap.width() * i / 100;
    CHECK(std::abs(interface_impedance(m, w).z.imag()) < 1e-12);
  }
  const GapWindow win = common_gap_window(reference_medium().cell_a, reference_medium().cell_b, 1.0, 0.0, gap, 0.5, 20);
  for (const auto& s : impedance_scan(m, win.rect, 40, 41)) {
    if (s.omega.imag() == 0.0) continue;
    CHECK_FALSE(s.has_pole());
    CHECK(std::isfinite(std::abs(s.z)));
  }
}

TEST_CASE("pole flags") {
  const DampedMedium m = reference_medium().damped(0.0);
  const double w = testing_support::ref_first_gap().mid();
  // With an absurd tolerance every eigenvector counts as a pole: flags set, Z infinite.
  const ImpedanceSample s = interface_impedance(m, w, 1e30);
  CHECK(s.pole_a);
  CHECK(s.pole_b);
  CHECK(s.has_pole());
  CHECK(std::isinf(std::abs(s.z)));
  CHECK_THROWS_AS(surface_impedance_right(m.cell_b, 1.0, w, 1e30), PoleDetected);
  CHECK_THROWS_AS(surface_impedance_left(m.cell_a, 1.0, w, 1e30), PoleDetected);
  CHECK_FALSE(interface_impedance(m, w).has_pole());
}

TEST_CASE("impedance scan layout") {
  const DampedMedium m = reference_medium().damped(0.2);
  const Rect r{1.8, 2.2, -0.1, 0.1};
  const auto scan = impedance_scan(m, r, 5, 3);
  REQUIRE(scan.size() == 15);
  CHECK(scan[0].omega == cplx(1.8, -0.1));
  CHECK(std::abs(scan[1].omega - cplx(1.9, -0.1)) < 1e-15);
  CHECK(std::abs(scan[5].omega - cplx(1.8, 0.0)) < 1e-15);
  CHECK(scan[14].omega == cplx(2.2, 0.1));
  for (const auto& s : scan) CHECK(std::abs(s.z - interface_impedance(m, s.omega).z) == 0.0);
}

TEST_CASE("impedance refuses band frequencies") {
  const DampedMedium m = reference_medium().damped(0.0);
  CHECK_THROWS_AS(interface_impedance(m, 1.0), BandCollision);
}

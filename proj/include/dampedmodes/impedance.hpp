#pragma once

#include <vector>

#include "dampedmodes/common.hpp"
#include "dampedmodes/floquet.hpp"
#include "dampedmodes/medium.hpp"

namespace dampedmodes {

inline constexpr double kPoleTol = 1e-12;

/// Z_B = u / flux of the right-decaying solution at x0+, i.e. V1/V2 of the
/// stable eigenvector of T_B. Throws PoleDetected when |V2| < pole_tol |V1|
/// and BandCollision when omega is not inside a gap of the cell.
cplx surface_impedance_right(const DampedCell& cell_b, double mu0, cplx omega, double pole_tol = kPoleTol);

/// Z_A = -u / flux of the left-decaying solution at x0-. The left-decaying state
/// is the reflected stable eigenvector S v_in = (V1, -V2), so Z_A = V1/V2.
cplx surface_impedance_left(const DampedCell& cell_a, double mu0, cplx omega, double pole_tol = kPoleTol);

struct ImpedanceSample {
  cplx omega{};
  cplx z_a{};
  cplx z_b{};
  cplx z{};  // z_a + z_b; infinite when a pole flag is set
  bool pole_a = false;
  bool pole_b = false;

  bool has_pole() const { return pole_a || pole_b; }
};

/// Z = Z_A + Z_B with pole flags. An interface-localized mode exists iff Z = 0.
/// Throws BandCollision if omega is not in a common gap.
ImpedanceSample interface_impedance(const DampedMedium& medium, cplx omega, double pole_tol = kPoleTol);

/// (-V2^B, V1^B) . (V1^A, -V2^A) computed from the unit-normalized stable
/// eigenvectors of both cells. Equals -V2^A V2^B Z, so it vanishes exactly
/// where the interface impedance does.
cplx interface_pairing(const DampedMedium& medium, cplx omega);

/// Row-major nx x ny scan over a rectangle (re fastest).
std::vector<ImpedanceSample> impedance_scan(const DampedMedium& medium, const Rect& region, int nx, int ny);

}  // namespace dampedmodes

#pragma once

#include <span>
#include <vector>

#include "dampedmodes/common.hpp"
#include "dampedmodes/medium.hpp"

namespace dampedmodes {

/// State carried across the layers: the field value u and the flux (1/eps) u',
/// both continuous across permittivity jumps.
struct CellState {
  cplx u{};
  cplx flux{};

  double norm() const { return std::hypot(std::abs(u), std::abs(flux)); }
};

inline CellState operator*(cplx s, const CellState& v) { return {s * v.u, s * v.flux}; }
inline CellState operator+(const CellState& a, const CellState& b) { return {a.u + b.u, a.flux + b.flux}; }
inline CellState operator-(const CellState& a, const CellState& b) { return {a.u - b.u, a.flux - b.flux}; }

/// 2x2 propagator of (u, flux). Unit determinant.
struct TransferMatrix {
  cplx t11{1.0}, t12{0.0}, t21{0.0}, t22{1.0};

  static TransferMatrix identity() { return {}; }

  cplx det() const { return t11 * t22 - t12 * t21; }
  cplx trace() const { return t11 + t22; }
  /// Inverse assuming det = 1.
  TransferMatrix inverse() const { return {t22, -t12, -t21, t11}; }
  /// S T S with S = diag(1, -1).
  TransferMatrix reflected() const { return {t11, -t12, -t21, t22}; }
  double max_abs() const;
  double max_abs_diff(const TransferMatrix& other) const;

  CellState operator()(const CellState& s) const {
    return {t11 * s.u + t12 * s.flux, t21 * s.u + t22 * s.flux};
  }
};

/// Matrix product: (a * b) applies b first.
TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);

/// Closed-form propagator across a constant-permittivity segment of length `width`.
/// With k = omega sqrt(mu0 eps):
///   [[cos(k d), eps sin(k d)/k], [-(k/eps) sin(k d), cos(k d)]]
/// Entries are even in k, so the branch of the square root does not matter.
TransferMatrix layer_matrix(cplx eps, double width, cplx omega, double mu0);
inline TransferMatrix layer_matrix(const DampedLayer& layer, cplx omega, double mu0) {
  return layer_matrix(layer.eps, layer.width, omega, mu0);
}

/// Monodromy over one period, leftmost layer applied first.
TransferMatrix cell_matrix(const DampedCell& cell, cplx omega, double mu0);

/// State at local position x in [0, 1] of a cell, given the state at the cell's left end.
CellState propagate_within_cell(const DampedCell& cell, const CellState& start, double local_x, cplx omega,
                                double mu0);

/// Trace of the monodromy matrix; bands satisfy f(omega) = 2 cos(kappa).
cplx discriminant(const DampedCell& cell, cplx omega, double mu0);

enum class SpectralClass { Band, Gap };

struct Classification {
  SpectralClass kind = SpectralClass::Gap;
  cplx f{};
  double tol_im = 0.0;
  double tol_mag = 0.0;

  bool is_band() const { return kind == SpectralClass::Band; }
};

inline constexpr double kBandTolIm = 1e-9;
inline constexpr double kBandTolMag = 1e-9;

/// Band iff |Im f| <= tol_im and |f| <= 2 - tol_mag.
Classification classify_point(const DampedCell& cell, cplx omega, double mu0, double tol_im = kBandTolIm,
                              double tol_mag = kBandTolMag);

struct EigenSplit {
  cplx lambda_in{};   // |lambda_in| < 1
  cplx lambda_out{};  // |lambda_out| > 1
  CellState v_in;     // unit length, first nonzero component real positive
  CellState v_out;
};

inline constexpr double kEigenMargin = 1e-6;

/// Closed-form eigen-decomposition of a unit-determinant matrix inside a gap.
/// Throws BandCollision when |lambda_in| > 1 - margin.
EigenSplit stable_eigenpair(const TransferMatrix& t, double margin = kEigenMargin);

/// Kernel vector of (T - lambda I) from the numerically larger row, normalized.
CellState eigenvector(const TransferMatrix& t, cplx lambda);

/// Unit Euclidean length with the first nonzero component rotated to the positive real axis.
CellState normalized(const CellState& v);

/// Maximal intervals of (0, omega_max] where |f| >= 2 for an undamped cell,
/// edges refined by bisection. Throws std::invalid_argument for damped cells.
std::vector<Interval> real_gaps(const DampedCell& cell, double mu0, double omega_max, double scan_step = 1e-3);

/// Pairwise intersections of two gap lists, in increasing order.
std::vector<Interval> intersect_gaps(const std::vector<Interval>& a, const std::vector<Interval>& b);

struct BandPoint {
  double kappa = 0.0;
  cplx omega{};
};

struct BandCurve {
  int band_index = 0;
  double delta = 0.0;
  std::vector<BandPoint> points;  // in the order of the kappa grid
};

inline constexpr double kBandResidualTol = 1e-10;

/// Band curves omega_n(kappa) for all complete bands below omega_max.
/// Bands are seeded on the real axis of the undamped cell (one root of f = 0 per
/// band), continued along kappa by Newton steps and then continued in damping up
/// to `delta`. Every returned point satisfies |f(omega) - 2 cos(kappa)| < 1e-10.
/// Throws ContinuationBreakdown if a Newton step cannot be completed.
std::vector<BandCurve> band_curves(const UnitCell& cell, double mu0, double delta,
                                   std::span<const double> kappa_grid, double omega_max,
                                   double seed_scan_step = 1e-3);

/// Rectangle in the omega-plane with no band point of either cell inside.
struct GapWindow {
  Rect rect;
  double margin = 0.0;  // distance to the nearest detected band point less the search-grid diagonal
  int density = 0;
  double delta = 0.0;
};

/// Band points (Im f = 0, |f| < 2) detected on a grid over `region`: direct grid
/// hits plus sign changes of Im f along grid edges refined by bisection.
std::vector<cplx> detect_band_points(const DampedCell& cell, double mu0, const Rect& region, int nx, int ny);

/// Rectangle spanning the seed interval (shrunk by inset_fraction of its width at
/// each end) and [-im_halfwidth, im_halfwidth], certified free of band points of
/// both damped cells. Throws WindowInvaded.
GapWindow common_gap_window(const UnitCell& cell_a, const UnitCell& cell_b, double mu0, double delta,
                            Interval seed, double im_halfwidth, int density, double inset_fraction = 0.02);

}  // namespace dampedmodes

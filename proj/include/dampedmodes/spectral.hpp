#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "dampedmodes/common.hpp"
#include "dampedmodes/floquet.hpp"
#include "dampedmodes/impedance.hpp"
#include "dampedmodes/medium.hpp"

namespace dampedmodes {

using Contour = std::variant<Rect, Circle>;

/// A located zero of the interface impedance.
struct RootResult {
  cplx omega{};
  double residual = 0.0;       // |Z(omega)|
  std::optional<int> winding;  // zero count on `contour`; empty if certification failed
  Contour contour = Circle{};
  double delta = 0.0;
  int iterations = 0;

  bool certified() const { return winding && *winding == 1; }
};

// ---------------------------------------------------------------------------
// Undamped seeds: bulk indices and real-axis root finding
// ---------------------------------------------------------------------------

enum class GapEdge { Lower, Upper };

struct BulkIndex {
  int value = 0;  // +1 symmetric (flux vanishes at x_n), -1 antisymmetric (u vanishes)
  double edge_omega = 0.0;
  double edge_kappa = 0.0;  // 0 or pi
  double evidence = 0.0;    // suppressed / dominant eigenvector component
};

inline constexpr double kParityTol = 1e-6;

/// Parity of the band-edge Bloch mode of an undamped cell at the chosen edge of `gap`.
/// Throws ParityAmbiguous if neither eigenvector component is suppressed below
/// parity_tol (edge mislocated or cell not symmetric).
BulkIndex bulk_index(const DampedCell& cell, double mu0, Interval gap, GapEdge side = GapEdge::Lower,
                     double parity_tol = kParityTol);

/// The maximal real gap of an undamped cell containing omega_inside.
Interval enclosing_gap(const DampedCell& cell, double mu0, double omega_inside, double scan_step = 1e-3);

/// Argument phi of u(-x) = e^{i phi} u(x) for the Bloch mode at quasimomentum
/// kappa_edge and (possibly complex) band-edge frequency edge_omega, evaluated
/// from u(-h)/u(h) at several offsets h about the cell boundary.
/// Throws RatioInconsistent if the ratio varies with h beyond ratio_tol (relative).
double zak_phase_at_edge(const DampedCell& cell, double mu0, cplx edge_omega, double kappa_edge,
                         double ratio_tol = 1e-6);

/// True iff the lower-edge bulk indices of the two cells' own gaps around
/// `common_gap` sum to zero.
bool predict_interface_mode(const DampedCell& cell_a, const DampedCell& cell_b, double mu0, Interval common_gap);

struct RealAxisScan {
  std::vector<double> roots;  // sign changes of Z that close onto a zero
  std::vector<double> poles;  // sign changes of Z through infinity
  int samples = 0;
};

/// Sign changes of the real function omega -> Z(omega) on the gap interior of an
/// undamped medium, each bisected to `bracket_tol` and classified as root or pole.
RealAxisScan scan_real_axis(const DampedMedium& medium, Interval gap, int samples = 2000,
                            double bracket_tol = 1e-12);

/// The real interface-mode frequency in `gap` of an undamped medium, certified
/// afterwards by a winding count on a rectangle around it.
/// Throws NoSignChange if Z has no zero crossing in the gap.
RootResult find_root_real(const DampedMedium& medium, Interval gap, double tol = 1e-10, int samples = 2000);

// ---------------------------------------------------------------------------
// Argument principle
// ---------------------------------------------------------------------------

/// Zeros of Z enclosed by the contour (counter-clockwise), from the total change
/// of arg Z. Samples are refined until every phase increment is below pi/2.
/// Throws PoleOnContour, PhaseRefinementExhausted (a zero on or very near the
/// contour) and BandCollision (contour leaves the common gap).
int winding_number(const DampedMedium& medium, const Contour& contour, int max_depth = 24,
                   int initial_samples = 64);

/// Newton polishing with a central-difference derivative. The result carries a
/// winding certificate on a circle of radius max(4 |omega - omega0|, 1e-6).
/// Throws Diverged and StepOutOfWindow.
RootResult refine_root(const DampedMedium& medium, cplx omega0, double tol = 1e-12, int max_iter = 50,
                       std::optional<Rect> window = std::nullopt);

/// All zeros inside `region`, by recursive bisection of rectangles guided by winding counts.
std::vector<RootResult> locate_roots(const DampedMedium& medium, const Rect& region, double tol = 1e-12,
                                     int max_depth = 24);

// ---------------------------------------------------------------------------
// Damping continuation
// ---------------------------------------------------------------------------

using MediumFamily = std::function<DampedMedium(double)>;

struct ContinuationStep {
  RootResult root;
  bool accepted = false;
  double step = 0.0;  // damping increment attempted
};

inline constexpr double kMinDampingStep = 1e-8;

/// Tracks a root from start.delta to delta_target. Each step polishes the
/// previous root at the new damping and accepts it only with winding = 1 on a
/// circle of radius max(4 |d omega|, 1e-6). Failed steps are halved; after three
/// consecutive successes the step grows by 1.5x up to initial_step.
/// Rejected attempts are kept in the trace with accepted = false.
/// Throws StepUnderflow when the step drops below 1e-8.
std::vector<ContinuationStep> continuation(const MediumFamily& family, const RootResult& start, double delta_target,
                                           double initial_step = 0.05, double tol = 1e-12);
std::vector<ContinuationStep> continuation(const InterfaceMedium& medium, const RootResult& start,
                                           double delta_target, double initial_step = 0.05, double tol = 1e-12);

/// Last accepted root of a trace.
const RootResult& final_root(const std::vector<ContinuationStep>& trace);

// ---------------------------------------------------------------------------
// Rouche regions
// ---------------------------------------------------------------------------

enum class RoucheRegion : char { Certified = 'c', Violated = 'w', Pole = 'p' };

/// |Z2| - |Z2 - Z1|; NaN where either impedance has a pole.
double rouche_slack(const DampedMedium& medium_1, const DampedMedium& medium_2, cplx omega);

/// R_c where the slack exceeds equality_tol, R_w otherwise (closed inequality).
inline constexpr double kRoucheEqualityTol = 1e-10;

RoucheRegion rouche_classify(const DampedMedium& medium_1, const DampedMedium& medium_2, cplx omega,
                             double equality_tol = kRoucheEqualityTol);

struct RoucheMap {
  Rect window;
  int nx = 0;
  int ny = 0;
  double equality_tol = kRoucheEqualityTol;
  DampedMedium medium_1;
  DampedMedium medium_2;
  std::vector<RoucheRegion> regions;  // row-major, re fastest
  std::vector<RootResult> roots_1;
  std::vector<RootResult> roots_2;

  double delta_1() const { return medium_1.delta; }
  double delta_2() const { return medium_2.delta; }
  cplx omega_at(int i, int j) const;
  RoucheRegion region_at(int i, int j) const { return regions[static_cast<std::size_t>(j * nx + i)]; }
  int count(RoucheRegion r) const;
};

/// Classifies a resolution x resolution grid over the window and locates the
/// zeros of both impedances inside it.
RoucheMap rouche_map(const DampedMedium& medium_1, const DampedMedium& medium_2, const Rect& window, int resolution,
                     double equality_tol = kRoucheEqualityTol);

/// First circle centred at (omega1 + omega2)/2, inside the map window and
/// enclosing both roots, whose sampled points all lie in R_c.
std::optional<Circle> find_enclosing_contour(const RoucheMap& map, cplx omega1, cplx omega2, int samples = 256,
                                             int radii = 48);

}  // namespace dampedmodes

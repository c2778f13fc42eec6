#pragma once

#include <string>
#include <vector>

#include "dampedmodes/common.hpp"

namespace dampedmodes {

/// One constant-permittivity slab of a unit cell.
/// The permittivity at damping delta is eps_re + i * eps_im_coeff * delta.
struct Layer {
  double eps_re = 1.0;
  double eps_im_coeff = 0.0;
  double width = 0.0;  // fraction of the unit period

  bool operator==(const Layer&) const = default;
};

/// One period of a layered material, listed left to right. Widths sum to 1.
struct UnitCell {
  std::vector<Layer> layers;
  std::string label;

  UnitCell reversed() const;
  double max_damping_coeff() const;
};

enum class Violation {
  Empty,
  WidthSum,
  NonPositiveWidth,
  NonPositiveEps,
  NegativeDampingCoeff,
  NotSymmetric,
};

const char* to_string(Violation v);

struct ValidationIssue {
  Violation kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool has(Violation v) const;
};

inline constexpr double kGeometryTol = 1e-12;

/// Checks the structural assumptions: nonempty, positive widths summing to one,
/// Re(eps) > 0, nonnegative damping coefficients and inversion symmetry
/// (layer sequence equal to its reversal field by field).
ValidationReport validate_cell(const UnitCell& cell);

struct DampedLayer {
  cplx eps;
  double width = 0.0;
};

/// A unit cell with concrete complex permittivities.
struct DampedCell {
  std::vector<DampedLayer> layers;
};

/// Throws std::invalid_argument for negative delta.
DampedCell with_damping(const UnitCell& cell, double delta);

/// Single-layer cell of constant permittivity.
DampedCell homogeneous_cell(cplx eps);

/// Both cells of an interface medium at a fixed damping.
struct DampedMedium {
  DampedCell cell_a;
  DampedCell cell_b;
  double mu0 = 1.0;
  double delta = 0.0;
};

/// Material A on x < 0, material B on x >= 0, interface at x0 = 0 and cell
/// endpoints x_n = n.
struct InterfaceMedium {
  UnitCell cell_a;
  UnitCell cell_b;
  double mu0 = 1.0;
  double delta = 0.0;

  InterfaceMedium at_delta(double d) const;
  DampedMedium damped() const;
  DampedMedium damped(double d) const;
};

/// Permittivity of the glued medium at position x for damping delta.
/// Right-continuous at layer and cell boundaries.
cplx permittivity_at(const InterfaceMedium& medium, double x, double delta);

/// D1-D2-D1 cell A and D2-D1-D2 cell B with eps 1 and 4, quarter/half/quarter
/// widths, unit damping coefficients and mu0 = 1.
InterfaceMedium reference_medium(double delta = 0.0);

}  // namespace dampedmodes

#pragma once

#include <vector>

#include "dampedmodes/common.hpp"
#include "dampedmodes/floquet.hpp"
#include "dampedmodes/medium.hpp"

namespace dampedmodes {

struct LatticeValue {
  int n = 0;  // cell endpoint x_n = n
  cplx u{};
  cplx flux{};
};

struct DenseSample {
  double x = 0.0;
  cplx u{};
};

/// Localized interface mode on [-n_cells, n_cells], normalized to u(x0) = 1.
struct ModeProfile {
  cplx omega{};
  int n_cells = 0;
  std::vector<LatticeValue> lattice;  // n = -n_cells .. n_cells
  std::vector<DenseSample> samples;
  cplx lambda_a{};  // stable multipliers of T_A and T_B
  cplx lambda_b{};
  double interface_mismatch = 0.0;  // |cross product| of the unit interface states of both sides
  double max_junction_jump = 0.0;   // largest |state jump| at a cell endpoint

  const LatticeValue& at(int n) const { return lattice[static_cast<std::size_t>(n + n_cells)]; }
};

inline constexpr double kMismatchTol = 1e-8;

/// Builds the mode from the stable eigenvectors: the B-side eigenvector fixes the
/// interface state, the right half is lambda_B^n times it and the left half is
/// lambda_A^|n| times the reflected A-side eigenvector. Dense samples come from
/// the closed-form layer propagators within each cell.
/// Throws NotARoot if the two interface states are not parallel within mismatch_tol.
ModeProfile interface_mode_profile(const DampedMedium& medium, cplx omega, int n_cells, int samples_per_cell = 64,
                                   double mismatch_tol = kMismatchTol);

/// State (u, flux) of the profile at any x in [-n_cells, n_cells].
CellState mode_state_at(const DampedMedium& medium, const ModeProfile& profile, double x);

struct DecayEnvelope {
  cplx lambda_a{};
  cplx lambda_b{};
  int n_cells = 0;
  std::vector<double> values;  // F(x_n) for n = -n_cells .. n_cells

  /// |lambda_A|^|n| for n < 0, |lambda_B|^n for n > 0, 1 at the interface.
  double at(int n) const;
};

/// Throws BandCollision if omega is not in a gap of both cells.
DecayEnvelope decay_envelope(const DampedMedium& medium, cplx omega, int n_cells);

struct DecayReport {
  int n_min = 0;
  int ratios_checked = 0;
  double bound_u = 0.0;  // max |u(x_n)| / (|state(x_0)| F(x_n)) over |n| >= n_min
  double bound_flux = 0.0;
  double max_rate_error_u = 0.0;  // max relative deviation of |u(x_{n+-1})|/|u(x_n)| from |lambda|
  double max_rate_error_flux = 0.0;

  bool rates_within(double rel_tol) const {
    return max_rate_error_u <= rel_tol && max_rate_error_flux <= rel_tol;
  }
};

/// Boundedness and per-cell decay rates of the lattice values against the envelope.
/// Invariant under global rescaling of the profile.
DecayReport verify_decay(const ModeProfile& profile, const DecayEnvelope& envelope, int n_min);

}  // namespace dampedmodes

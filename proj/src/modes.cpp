#include "dampedmodes/modes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dampedmodes/errors.hpp"

namespace dampedmodes {

namespace {

CellState value_normalized(const CellState& s) {
  if (std::abs(s.u) > 1e-12 * std::abs(s.flux)) return (1.0 / s.u) * s;
  return (1.0 / s.flux) * s;
}

}  // namespace

ModeProfile interface_mode_profile(const DampedMedium& medium, cplx omega, int n_cells, int samples_per_cell,
                                   double mismatch_tol) {
  if (n_cells < 0) throw std::invalid_argument("interface_mode_profile: n_cells must be nonnegative");
  if (samples_per_cell < 1) throw std::invalid_argument("interface_mode_profile: samples_per_cell must be positive");
  const EigenSplit ea = stable_eigenpair(cell_matrix(medium.cell_a, omega, medium.mu0));
  const EigenSplit eb = stable_eigenpair(cell_matrix(medium.cell_b, omega, medium.mu0));

  const CellState right = eb.v_in;
  const CellState left{ea.v_in.u, -ea.v_in.flux};  // left-decaying state S v_in

  ModeProfile p;
  p.omega = omega;
  p.n_cells = n_cells;
  p.lambda_a = ea.lambda_in;
  p.lambda_b = eb.lambda_in;
  p.interface_mismatch = std::abs(right.u * left.flux - right.flux * left.u);
  if (p.interface_mismatch > mismatch_tol) {
    throw NotARoot("interface states of the two half-space solutions are not parallel", p.interface_mismatch);
  }

  const CellState s_right = value_normalized(right);
  // Scale the A-side state to coincide with the B-side one at x0.
  const cplx scale = std::abs(left.u) >= std::abs(left.flux) ? s_right.u / left.u : s_right.flux / left.flux;
  const CellState s_left = scale * left;

  p.lattice.resize(static_cast<std::size_t>(2 * n_cells + 1));
  p.lattice[static_cast<std::size_t>(n_cells)] = {0, s_right.u, s_right.flux};
  cplx pow_b = 1.0, pow_a = 1.0;
  for (int n = 1; n <= n_cells; ++n) {
    pow_b *= eb.lambda_in;
    pow_a *= ea.lambda_in;
    const CellState sb = pow_b * s_right;
    const CellState sa = pow_a * s_left;
    p.lattice[static_cast<std::size_t>(n_cells + n)] = {n, sb.u, sb.flux};
    p.lattice[static_cast<std::size_t>(n_cells - n)] = {-n, sa.u, sa.flux};
  }

  p.samples.reserve(static_cast<std::size_t>(2 * n_cells * samples_per_cell + 1));
  for (int n = -n_cells; n < n_cells; ++n) {
    const DampedCell& cell = n < 0 ? medium.cell_a : medium.cell_b;
    const LatticeValue& lv = p.at(n);
    const CellState start{lv.u, lv.flux};
    for (int j = 0; j < samples_per_cell; ++j) {
      const double t = static_cast<double>(j) / samples_per_cell;
      p.samples.push_back({n + t, propagate_within_cell(cell, start, t, omega, medium.mu0).u});
    }
    const CellState end = cell_matrix(cell, omega, medium.mu0)(start);
    const LatticeValue& next = p.at(n + 1);
    p.max_junction_jump = std::max({p.max_junction_jump, std::abs(end.u - next.u), std::abs(end.flux - next.flux)});
  }
  const LatticeValue& last = p.at(n_cells);
  p.samples.push_back({static_cast<double>(n_cells), last.u});
  return p;
}

CellState mode_state_at(const DampedMedium& medium, const ModeProfile& profile, double x) {
  const double lim = profile.n_cells;
  if (!(x >= -lim && x <= lim)) throw std::out_of_range("mode_state_at: x outside the profile");
  int n = static_cast<int>(std::floor(x));
  if (n >= profile.n_cells) n = profile.n_cells - 1;
  if (profile.n_cells == 0) return {profile.at(0).u, profile.at(0).flux};
  const LatticeValue& lv = profile.at(n);
  const DampedCell& cell = n < 0 ? medium.cell_a : medium.cell_b;
  return propagate_within_cell(cell, {lv.u, lv.flux}, x - n, profile.omega, medium.mu0);
}

double DecayEnvelope::at(int n) const {
  if (n == 0) return 1.0;
  return std::pow(std::abs(n < 0 ? lambda_a : lambda_b), std::abs(n));
}

DecayEnvelope decay_envelope(const DampedMedium& medium, cplx omega, int n_cells) {
  DecayEnvelope env;
  env.lambda_a = stable_eigenpair(cell_matrix(medium.cell_a, omega, medium.mu0)).lambda_in;
  env.lambda_b = stable_eigenpair(cell_matrix(medium.cell_b, omega, medium.mu0)).lambda_in;
  env.n_cells = n_cells;
  for (int n = -n_cells; n <= n_cells; ++n) env.values.push_back(env.at(n));
  return env;
}

DecayReport verify_decay(const ModeProfile& profile, const DecayEnvelope& envelope, int n_min) {
  DecayReport r;
  r.n_min = n_min;
  const LatticeValue& origin = profile.at(0);
  const double scale = std::hypot(std::abs(origin.u), std::abs(origin.flux));
  if (scale == 0.0) throw std::invalid_argument("verify_decay: profile vanishes at the interface");
  const int n_cells = profile.n_cells;
  for (int n = -n_cells; n <= n_cells; ++n) {
    if (std::abs(n) < n_min) continue;
    const LatticeValue& lv = profile.at(n);
    const double f = envelope.at(n);
    r.bound_u = std::max(r.bound_u, std::abs(lv.u) / (scale * f));
    r.bound_flux = std::max(r.bound_flux, std::abs(lv.flux) / (scale * f));
  }
  // Ratio from x_n to the next endpoint away from the interface.
  auto rate_error = [](cplx from, cplx to, double lam) {
    if (std::abs(from) == 0.0) return 0.0;
    return std::abs(std::abs(to) / std::abs(from) - lam) / lam;
  };
  for (int n = std::max(n_min, 0); n < n_cells; ++n) {
    for (int sign : {+1, -1}) {
      const LatticeValue& from = profile.at(sign * n);
      const LatticeValue& to = profile.at(sign * (n + 1));
      const double lam = std::abs(sign > 0 ? envelope.lambda_b : envelope.lambda_a);
      r.max_rate_error_u = std::max(r.max_rate_error_u, rate_error(from.u, to.u, lam));
      r.max_rate_error_flux = std::max(r.max_rate_error_flux, rate_error(from.flux, to.flux, lam));
      ++r.ratios_checked;
    }
  }
  return r;
}

}  // namespace dampedmodes
